// postedit-server: the annotation HTTP API.
//
//   postedit-server --config service.json --bind 0.0.0.0:8080 --store file --store-path data/store.json

#include <CLI11.hpp>
#include <csignal>
#include <iostream>
#include <pthread.h>
#include <thread>

#include "postedit/service/config.hpp"
#include "postedit/service/http_api.hpp"

namespace {

using namespace postedit;

std::shared_ptr<detection::EngineRegistry> build_registry(const service::ServiceConfig& config) {
  auto registry = std::make_shared<detection::EngineRegistry>();
  const auto transport = detection::make_default_transport();
  for (const auto& engine : config.engines) registry->add(detection::make_engine(engine, transport));
  return registry;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-editing annotation service"};
  std::string config_path;
  std::string bind;
  std::string store;
  std::string store_path;
  app.add_option("--config", config_path, "JSON config file")->check(CLI::ExistingFile);
  app.add_option("--bind", bind, "host:port to listen on");
  app.add_option("--store", store, "store backend")->check(CLI::IsMember({"memory", "file"}));
  app.add_option("--store-path", store_path, "file store location");
  CLI11_PARSE(app, argc, argv);

  // Block termination signals in every thread; one thread waits for them.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  try {
    auto config = config_path.empty() ? service::default_config() : service::load_config(config_path);
    if (!bind.empty()) config.bind = bind;
    if (!store.empty()) config.store = *service::parse_store_backend(store);
    if (!store_path.empty()) config.store_path = store_path;
    service::validate(config);

    auto backing = config.store == service::StoreBackend::kFile
                       ? std::make_shared<service::Store>(config.store_path)
                       : std::make_shared<service::Store>();
    auto svc = std::make_shared<service::Service>(std::move(backing), build_registry(config));
    auto router = std::make_shared<const service::Router>(svc, service::resolve_tokens(config));

    service::ApiServer server(router);
    const auto address = service::parse_bind(config.bind);
    const int port = server.bind(address.host, address.port);
    std::cerr << "listening on " << address.host << ":" << port << " (store: " << to_string(config.store)
              << ", engines: " << svc->engines().ids().size() << ")\n";

    std::thread waiter([&server, signals] {
      int received = 0;
      sigwait(&signals, &received);
      server.stop();
    });
    server.listen();
    // listen() can also return on its own (socket failure); release the waiter.
    pthread_kill(waiter.native_handle(), SIGTERM);
    waiter.join();
  } catch (const Error& e) {
    std::cerr << "postedit-server: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
