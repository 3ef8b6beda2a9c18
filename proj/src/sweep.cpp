#include "sbsa/sweep.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace sbsa {

void SweepSpec::validate() const {
  if (steps < 2) throw std::invalid_argument("sweep needs at least 2 steps");
  if (!std::isfinite(g_min) || !std::isfinite(g_max) || g_min < 0.0 || g_max < g_min) {
    throw std::invalid_argument("g range must be finite, non-negative and ordered");
  }
  if (ks_over_k.empty()) throw std::invalid_argument("at least one kappa_s/kappa value is required");
  for (double ks : ks_over_k) {
    if (!std::isfinite(ks) || ks < 0.0) throw std::invalid_argument("kappa_s/kappa values must be >= 0");
  }
  if (!std::isfinite(gamma) || gamma < 0.0) throw std::invalid_argument("gamma must be >= 0");
  if (!std::isfinite(detuning)) throw std::invalid_argument("detuning must be finite");
}

std::vector<double> SweepSpec::g_grid() const {
  std::vector<double> g(steps);
  const double span = g_max - g_min;
  for (std::size_t i = 0; i < steps; ++i) {
    g[i] = g_min + span * static_cast<double>(i) / static_cast<double>(steps - 1);
  }
  return g;
}

std::vector<QualityPoint> run_sweep(const SweepSpec& spec, unsigned threads) {
  spec.validate();
  const auto grid = spec.g_grid();
  const std::size_t total = grid.size() * spec.ks_over_k.size();
  std::vector<QualityPoint> rows(total);

  auto evaluate = [&](std::size_t k) {
    const double ks = spec.ks_over_k[k / grid.size()];
    const double g = grid[k % grid.size()];
    auto q = quality(CavityParams::from_ratios(g, ks, spec.gamma, spec.detuning));
    // Keep the requested grid values rather than the ratio recomputed from g.
    q.g_over_ktot = g;
    q.ks_over_k = ks;
    rows[k] = q;
  };

  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, total));
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> workers;
  for (unsigned t = 0; t < threads; ++t) {
    workers.emplace_back([&] {
      for (std::size_t k = next++; k < total; k = next++) evaluate(k);
    });
  }
  workers.clear();  // joins
  return rows;
}

namespace {

std::string format(double v) {
  std::array<char, 32> buf{};
  std::snprintf(buf.data(), buf.size(), "%.17g", v);
  return buf.data();
}

}  // namespace

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<QualityPoint>& rows) {
  out << "# gamma=" << format(spec.gamma) << " detuning=" << format(spec.detuning)
      << " note=eta2=1/2+eta1^2 reaches 1.5 at |r0|=|r_h|=1\n";
  out << kSweepHeader << '\n';
  for (const auto& r : rows) {
    out << format(r.g_over_ktot) << ',' << format(r.ks_over_k) << ',' << format(r.abs_r0) << ','
        << format(r.abs_rh) << ',' << format(r.f1) << ',' << format(r.eta1) << ',' << format(r.f2) << ','
        << format(r.eta2) << '\n';
  }
}

std::vector<QualityPoint> read_sweep_csv(std::istream& in) {
  std::vector<QualityPoint> rows;
  std::string line;
  bool seen_header = false;
  while (std::getline(in, line)) {
    if (line.empty() || line.front() == '#') continue;
    if (!seen_header) {
      if (line != kSweepHeader) throw std::runtime_error("unexpected sweep header: " + line);
      seen_header = true;
      continue;
    }
    std::array<double, 8> v{};
    const char* p = line.data();
    const char* end = line.data() + line.size();
    for (std::size_t k = 0; k < v.size(); ++k) {
      auto [ptr, ec] = std::from_chars(p, end, v[k]);
      if (ec != std::errc{}) throw std::runtime_error("malformed sweep row: " + line);
      p = ptr;
      if (k + 1 < v.size()) {
        if (p == end || *p != ',') throw std::runtime_error("malformed sweep row: " + line);
        ++p;
      }
    }
    if (p != end) throw std::runtime_error("trailing data in sweep row: " + line);
    rows.push_back({v[0], v[1], v[2], v[3], v[4], v[5], v[6], v[7]});
  }
  if (!seen_header) throw std::runtime_error("sweep file has no header");
  return rows;
}

}  // namespace sbsa
