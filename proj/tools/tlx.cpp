// tlx: NASA-TLX study analysis.
//
//   tlx summarize --input study.csv
//   tlx correlate --input study.csv --format json
//   tlx friedman  --input study.csv --dimension frustration --conditions excel,no_suggestions,xcomet,ec1
//   tlx wilcoxon  --input study.csv --dimension frustration --conditions xcomet,ec1

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "postedit/tlx/report.hpp"

namespace {

using namespace postedit;
using namespace postedit::tlx;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<Condition> parse_conditions(const std::vector<std::string>& names) {
  std::vector<Condition> out;
  for (const auto& name : names) {
    const auto c = parse_condition(name);
    if (!c) throw BadRequestError("unknown condition '" + name + "'");
    out.push_back(*c);
  }
  return out;
}

Dimension require_dimension(const std::string& name) {
  const auto d = parse_dimension(name);
  if (!d) throw BadRequestError("unknown dimension '" + name + "'");
  return *d;
}

void emit(const Json& json, const std::string& table, const std::string& format) {
  if (format == "json") {
    std::cout << json.dump(2) << "\n";
  } else {
    std::cout << table;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"NASA-TLX analysis"};
  app.require_subcommand(1);

  std::string input;
  std::string format = "table";
  std::string dimension;
  std::vector<std::string> conditions;
  double scale = kDefaultScaleMax;

  const auto add_common = [&](CLI::App* sub) {
    sub->add_option("--input", input, "TLX CSV file")->required()->check(CLI::ExistingFile);
    sub->add_option("--format", format, "output format")->check(CLI::IsMember({"table", "json"}));
    sub->add_option("--scale", scale, "maximum score on the rating scale");
  };
  auto* summarize_cmd = app.add_subcommand("summarize", "per-condition mean and sd");
  auto* correlate_cmd = app.add_subcommand("correlate", "Pearson matrix across dimensions");
  auto* friedman_cmd = app.add_subcommand("friedman", "Friedman test across conditions");
  auto* wilcoxon_cmd = app.add_subcommand("wilcoxon", "Wilcoxon signed-rank test between two conditions");
  for (auto* sub : {summarize_cmd, correlate_cmd, friedman_cmd, wilcoxon_cmd}) add_common(sub);
  for (auto* sub : {friedman_cmd, wilcoxon_cmd}) {
    sub->add_option("--dimension", dimension, "TLX dimension")->required();
    sub->add_option("--conditions", conditions, "comma-separated conditions")->delimiter(',');
  }
  CLI11_PARSE(app, argc, argv);

  try {
    const auto records = ingest_tlx_csv(read_file(input), scale);
    if (summarize_cmd->parsed()) {
      const auto summary = condition_summary(records);
      emit(to_json(summary), format_table(summary), format);
    } else if (correlate_cmd->parsed()) {
      const auto matrix = pearson_matrix(records);
      emit(to_json(matrix), format_table(matrix), format);
    } else if (friedman_cmd->parsed()) {
      std::vector<Condition> chosen(kAllConditions.begin(), kAllConditions.end());
      if (!conditions.empty()) chosen = parse_conditions(conditions);
      const auto design = build_block_design(records, require_dimension(dimension), chosen);
      const auto result = friedman_test(design.scores);
      emit(to_json(result), format_table(result), format);
    } else {
      const auto chosen = parse_conditions(conditions);
      if (chosen.size() != 2) throw BadRequestError("wilcoxon needs exactly two --conditions");
      const auto paired = pair_by_participant(records, require_dimension(dimension), chosen[0], chosen[1]);
      if (paired.unpaired > 0) {
        std::cerr << "tlx: ignoring " << paired.unpaired << " participant(s) without both conditions\n";
      }
      const auto result = wilcoxon_signed_rank(paired.a, paired.b);
      emit(to_json(result), format_table(result), format);
    }
  } catch (const Error& e) {
    std::cerr << "tlx: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
