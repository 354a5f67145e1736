#pragma once

#include <string>
#include <vector>

#include "postedit/json_codec.hpp"
#include "postedit/tlx/stats.hpp"

namespace postedit::tlx {

Json to_json(const std::vector<ConditionSummary>& summary);
Json to_json(const CorrelationMatrix& matrix);
Json to_json(const StatResult& result);

std::string format_table(const std::vector<ConditionSummary>& summary);
std::string format_table(const CorrelationMatrix& matrix);
std::string format_table(const StatResult& result);

}  // namespace postedit::tlx
