// postedit: offline operations on a file store.
//
//   postedit export --store-path data/store.json --dataset wmt --format csv > out.csv
//   postedit audit  --store-path data/store.json
//   postedit detect --pair pair.json [--config service.json --engine ec1]

#include <CLI11.hpp>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "postedit/service/config.hpp"
#include "postedit/service/service.hpp"

namespace {

using namespace postedit;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::shared_ptr<detection::EngineRegistry> build_registry(const service::ServiceConfig& config) {
  auto registry = std::make_shared<detection::EngineRegistry>();
  const auto transport = detection::make_default_transport();
  for (const auto& engine : config.engines) registry->add(detection::make_engine(engine, transport));
  return registry;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Post-editing store utilities"};
  app.require_subcommand(1);

  std::string store_path;
  std::string dataset;
  std::string format = "json";
  std::string config_path;
  std::string pair_path;
  std::string engine;

  auto* export_cmd = app.add_subcommand("export", "export completed annotations of a dataset");
  export_cmd->add_option("--store-path", store_path, "file store")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("--dataset", dataset, "dataset id")->required();
  export_cmd->add_option("--format", format, "json or csv")->check(CLI::IsMember({"json", "csv"}));

  auto* audit_cmd = app.add_subcommand("audit", "re-validate every stored annotation");
  audit_cmd->add_option("--store-path", store_path, "file store")->required()->check(CLI::ExistingFile);

  auto* detect_cmd = app.add_subcommand("detect", "run one engine on a pair document");
  detect_cmd->add_option("--pair", pair_path, "pair JSON file")->required()->check(CLI::ExistingFile);
  detect_cmd->add_option("--config", config_path, "service config with engines")->check(CLI::ExistingFile);
  detect_cmd->add_option("--engine", engine, "engine id");
  CLI11_PARSE(app, argc, argv);

  try {
    auto config = config_path.empty() ? service::default_config() : service::load_config(config_path);
    if (detect_cmd->parsed()) {
      const auto registry = build_registry(config);
      const auto pair = pair_from_json(parse_json(read_file(pair_path)));
      if (engine.empty()) engine = registry->ids().front();
      const auto result = registry->detect({pair, engine});
      Json out = Json::object();
      Json spans = Json::array();
      for (const auto& s : result.spans) spans.push_back(to_json(s));
      out["spans"] = std::move(spans);
      out["report"] = service::to_json(result.report);
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    service::Service svc(std::make_shared<service::Store>(store_path), build_registry(config));
    if (export_cmd->parsed()) {
      std::cout << svc.export_dataset(dataset, service::parse_export_format(format));
      return 0;
    }
    const auto findings = svc.audit();
    Json out = Json::array();
    for (const auto& f : findings) out.push_back(service::to_json(f));
    std::cout << out.dump(2) << "\n";
    return findings.empty() ? 0 : 2;
  } catch (const Error& e) {
    std::cerr << "postedit: " << e.what() << "\n";
    return 1;
  }
}
