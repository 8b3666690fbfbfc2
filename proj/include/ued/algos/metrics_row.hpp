#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace ued::algos {

struct MetricsRow {
  std::int64_t iteration = 0;
  std::uint64_t env_steps = 0;
  double return_p = 0.0;
  double return_a = 0.0;
  double regret = 0.0;
  double teacher_entropy = 0.0;
  double student_entropy = 0.0;
  double block_count_mean = 0.0;
  double shortest_path_mean = 0.0;
  double solved_rate_eval = 0.0;
  double wallclock_s = 0.0;

  bool all_finite() const;
};

// iteration,env_steps,return_P,return_A,regret,teacher_entropy,student_entropy,
// block_count_mean,shortest_path_mean,solved_rate_eval,wallclock_s
std::string metrics_header();
// Reals are printed with 17 significant digits so rows compare byte for byte.
std::string to_csv_row(const MetricsRow& row);
MetricsRow parse_csv_row(const std::string& line);

void write_metrics(std::ostream& out, const std::vector<MetricsRow>& rows);
// Expects the header line first.
std::vector<MetricsRow> read_metrics(std::istream& in);
std::vector<MetricsRow> read_metrics(const std::filesystem::path& path);

}  // namespace ued::algos
