#pragma once

#include <filesystem>
#include <vector>

#include "ued/algos/metrics_row.hpp"

namespace ued::tools {

// Small-multiple line charts of every metric column against env_steps.
void write_svg(const std::filesystem::path& path, const std::vector<algos::MetricsRow>& rows);

// Long format: env_steps,metric,value.
void write_long_csv(const std::filesystem::path& path, const std::vector<algos::MetricsRow>& rows);

}  // namespace ued::tools
