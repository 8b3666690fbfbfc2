#include "ued/algos/metrics_row.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "ued/core/errors.hpp"

namespace ued::algos {

namespace {

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

bool MetricsRow::all_finite() const {
  for (double x : {return_p, return_a, regret, teacher_entropy, student_entropy, block_count_mean,
                   shortest_path_mean, solved_rate_eval, wallclock_s}) {
    if (!std::isfinite(x)) return false;
  }
  return true;
}

std::string metrics_header() {
  return "iteration,env_steps,return_P,return_A,regret,teacher_entropy,student_entropy,"
         "block_count_mean,shortest_path_mean,solved_rate_eval,wallclock_s";
}

std::string to_csv_row(const MetricsRow& r) {
  std::ostringstream out;
  out << r.iteration << ',' << r.env_steps << ',' << fmt(r.return_p) << ',' << fmt(r.return_a)
      << ',' << fmt(r.regret) << ',' << fmt(r.teacher_entropy) << ',' << fmt(r.student_entropy)
      << ',' << fmt(r.block_count_mean) << ',' << fmt(r.shortest_path_mean) << ','
      << fmt(r.solved_rate_eval) << ',' << fmt(r.wallclock_s);
  return out.str();
}

MetricsRow parse_csv_row(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  if (cells.size() != 11) throw FieldError("metrics", "expected 11 columns: " + line);
  MetricsRow r;
  try {
    r.iteration = std::stoll(cells[0]);
    r.env_steps = std::stoull(cells[1]);
    double* reals[] = {&r.return_p,        &r.return_a,         &r.regret,
                       &r.teacher_entropy, &r.student_entropy,  &r.block_count_mean,
                       &r.shortest_path_mean, &r.solved_rate_eval, &r.wallclock_s};
    for (int i = 0; i < 9; ++i) *reals[i] = std::stod(cells[static_cast<std::size_t>(i + 2)]);
  } catch (const std::logic_error&) {
    throw FieldError("metrics", "malformed row: " + line);
  }
  return r;
}

void write_metrics(std::ostream& out, const std::vector<MetricsRow>& rows) {
  out << metrics_header() << '\n';
  for (const auto& r : rows) out << to_csv_row(r) << '\n';
}

std::vector<MetricsRow> read_metrics(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != metrics_header()) {
    throw FieldError("metrics", "missing or unexpected header");
  }
  std::vector<MetricsRow> rows;
  while (std::getline(in, line)) {
    if (!line.empty()) rows.push_back(parse_csv_row(line));
  }
  return rows;
}

std::vector<MetricsRow> read_metrics(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return read_metrics(in);
}

}  // namespace ued::algos
