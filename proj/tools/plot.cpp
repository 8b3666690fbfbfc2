#include "plot.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <utility>

namespace ued::tools {

namespace {

using Getter = double (*)(const algos::MetricsRow&);

const std::array<std::pair<const char*, Getter>, 9>& series() {
  static const std::array<std::pair<const char*, Getter>, 9> s{{
      {"return_P", [](const algos::MetricsRow& r) { return r.return_p; }},
      {"return_A", [](const algos::MetricsRow& r) { return r.return_a; }},
      {"regret", [](const algos::MetricsRow& r) { return r.regret; }},
      {"teacher_entropy", [](const algos::MetricsRow& r) { return r.teacher_entropy; }},
      {"student_entropy", [](const algos::MetricsRow& r) { return r.student_entropy; }},
      {"block_count_mean", [](const algos::MetricsRow& r) { return r.block_count_mean; }},
      {"shortest_path_mean", [](const algos::MetricsRow& r) { return r.shortest_path_mean; }},
      {"solved_rate_eval", [](const algos::MetricsRow& r) { return r.solved_rate_eval; }},
      {"wallclock_s", [](const algos::MetricsRow& r) { return r.wallclock_s; }},
  }};
  return s;
}

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

std::ofstream open(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_long_csv(const std::filesystem::path& path, const std::vector<algos::MetricsRow>& rows) {
  auto out = open(path);
  out << "env_steps,metric,value\n";
  for (const auto& r : rows) {
    for (const auto& [name, get] : series()) {
      out << r.env_steps << ',' << name << ',' << num(get(r)) << '\n';
    }
  }
}

void write_svg(const std::filesystem::path& path, const std::vector<algos::MetricsRow>& rows) {
  constexpr int kPanelW = 300, kPanelH = 180, kCols = 3, kPad = 30;
  const int n_panels = static_cast<int>(series().size());
  const int height = ((n_panels + kCols - 1) / kCols) * kPanelH;
  auto out = open(path);
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kCols * kPanelW << "\" height=\""
      << height << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  double x_max = 1.0;
  for (const auto& r : rows) x_max = std::max(x_max, static_cast<double>(r.env_steps));

  for (int p = 0; p < n_panels; ++p) {
    const auto& [name, get] = series()[static_cast<std::size_t>(p)];
    const int ox = (p % kCols) * kPanelW, oy = (p / kCols) * kPanelH;
    double lo = 0.0, hi = 0.0;
    if (!rows.empty()) lo = hi = get(rows.front());
    for (const auto& r : rows) {
      lo = std::min(lo, get(r));
      hi = std::max(hi, get(r));
    }
    if (hi - lo < 1e-12) hi = lo + 1.0;
    const double w = kPanelW - 2 * kPad, h = kPanelH - 2 * kPad;
    out << "<g transform=\"translate(" << ox << ',' << oy << ")\">\n"
        << "<text x=\"" << kPad << "\" y=\"18\">" << name << "</text>\n"
        << "<rect x=\"" << kPad << "\" y=\"" << kPad << "\" width=\"" << w << "\" height=\"" << h
        << "\" fill=\"none\" stroke=\"#999\"/>\n"
        << "<text x=\"2\" y=\"" << kPad + 4 << "\">" << num(hi) << "</text>\n"
        << "<text x=\"2\" y=\"" << kPad + h << "\">" << num(lo) << "</text>\n"
        << "<polyline fill=\"none\" stroke=\"#1f77b4\" points=\"";
    for (const auto& r : rows) {
      const double x = kPad + w * static_cast<double>(r.env_steps) / x_max;
      const double y = kPad + h * (1.0 - (get(r) - lo) / (hi - lo));
      out << num(x) << ',' << num(y) << ' ';
    }
    out << "\"/>\n</g>\n";
  }
  out << "</svg>\n";
}

}  // namespace ued::tools
