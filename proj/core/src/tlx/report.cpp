#include "postedit/tlx/report.hpp"

#include <iomanip>
#include <sstream>

namespace postedit::tlx {

namespace {

Json summary_json(const DimensionSummary& s) {
  Json j = Json::object();
  j["n"] = s.n;
  j["mean"] = s.mean;
  j["sd"] = s.sd ? Json(*s.sd) : Json(nullptr);
  return j;
}

std::string mean_sd(const DimensionSummary& s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(2) << s.mean << " ± ";
  if (s.sd) {
    os << *s.sd;
  } else {
    os << "n/a";
  }
  return os.str();
}

}  // namespace

Json to_json(const std::vector<ConditionSummary>& summary) {
  Json out = Json::array();
  for (const auto& cs : summary) {
    Json j = Json::object();
    j["condition"] = to_string(cs.condition);
    j["n"] = cs.n;
    Json dims = Json::object();
    for (std::size_t d = 0; d < 6; ++d) {
      dims[std::string(to_string(kAllDimensions[d]))] = summary_json(cs.dimensions[d]);
    }
    j["dimensions"] = std::move(dims);
    j["composite"] = summary_json(cs.composite);
    out.push_back(std::move(j));
  }
  return out;
}

Json to_json(const CorrelationMatrix& matrix) {
  Json out = Json::object();
  Json names = Json::array();
  for (const auto d : kAllDimensions) names.push_back(to_string(d));
  out["dimensions"] = names;
  Json rows = Json::array();
  for (const auto& row : matrix.r) rows.push_back(Json(row));
  out["r"] = std::move(rows);
  return out;
}

Json to_json(const StatResult& result) {
  Json j = Json::object();
  j["statistic"] = result.statistic;
  j["value"] = result.value;
  j["degrees_of_freedom"] =
      result.degrees_of_freedom ? Json(*result.degrees_of_freedom) : Json(nullptr);
  j["p_value"] = result.p_value;
  j["method"] = to_string(result.method);
  j["n"] = result.n;
  return j;
}

std::string format_table(const std::vector<ConditionSummary>& summary) {
  std::ostringstream os;
  os << std::left << std::setw(16) << "condition" << std::setw(4) << "n";
  for (const auto d : kAllDimensions) os << std::setw(16) << to_string(d);
  os << "composite\n";
  for (const auto& cs : summary) {
    os << std::setw(16) << to_string(cs.condition) << std::setw(4) << cs.n;
    // "±" is two bytes but one column; pad one extra.
    for (const auto& d : cs.dimensions) os << std::setw(17) << mean_sd(d);
    os << mean_sd(cs.composite) << "\n";
  }
  return os.str();
}

std::string format_table(const CorrelationMatrix& matrix) {
  std::ostringstream os;
  os << std::left << std::setw(13) << "";
  for (const auto d : kAllDimensions) os << std::right << std::setw(13) << to_string(d);
  os << "\n";
  for (std::size_t i = 0; i < 6; ++i) {
    os << std::left << std::setw(13) << to_string(kAllDimensions[i]);
    for (std::size_t j = 0; j < 6; ++j) {
      os << std::right << std::setw(13) << std::fixed << std::setprecision(2) << matrix.r[i][j];
    }
    os << "\n";
  }
  return os.str();
}

std::string format_table(const StatResult& result) {
  std::ostringstream os;
  os << std::left << std::setw(12) << "statistic" << result.statistic << "\n";
  os << std::setw(12) << "value" << std::setprecision(4) << std::fixed << result.value << "\n";
  if (result.degrees_of_freedom) {
    os << std::setw(12) << "df" << *result.degrees_of_freedom << "\n";
  }
  os << std::setw(12) << "p" << std::setprecision(6) << result.p_value << "\n";
  os << std::setw(12) << "method" << to_string(result.method) << "\n";
  os << std::setw(12) << "n" << result.n << "\n";
  return os.str();
}

}  // namespace postedit::tlx
