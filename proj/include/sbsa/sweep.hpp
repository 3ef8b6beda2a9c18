#pragma once

#include <iosfwd>
#include <vector>

#include "sbsa/bsa.hpp"

namespace sbsa {

struct SweepSpec {
  double g_min = 0.0;
  double g_max = 3.0;
  std::size_t steps = 31;
  std::vector<double> ks_over_k = {0.0, 0.3, 0.7};
  double gamma = 0.1;
  double detuning = 0.5;

  void validate() const;
  // g/(kappa + kappa_s) grid: g_min + (g_max - g_min) * i / (steps - 1).
  std::vector<double> g_grid() const;
};

// Rows ordered by (ks_over_k in the given order, g ascending). Grid points
// are evaluated on up to `threads` workers; 0 picks the hardware concurrency.
std::vector<QualityPoint> run_sweep(const SweepSpec& spec, unsigned threads = 0);

inline constexpr const char* kSweepHeader = "g_over_ktot,ks_over_k,abs_r0,abs_rh,F1,eta1,F2,eta2";

// One '#' metadata line, the header, then one row per point in %.17g.
void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<QualityPoint>& rows);

// Skips '#' lines and the header. Throws std::runtime_error on malformed rows.
std::vector<QualityPoint> read_sweep_csv(std::istream& in);

}  // namespace sbsa
