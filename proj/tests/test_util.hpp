#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "sbsa/register.hpp"

namespace sbsa::test {

inline std::vector<Complex> random_amplitudes(std::size_t dim, std::mt19937_64& gen) {
  std::normal_distribution<double> n(0.0, 1.0);
  std::vector<Complex> v(dim);
  double s = 0.0;
  for (auto& a : v) {
    a = {n(gen), n(gen)};
    s += std::norm(a);
  }
  for (auto& a : v) a /= std::sqrt(s);
  return v;
}

inline std::array<Complex, 4> random_spatial_pair(std::mt19937_64& gen) {
  const auto v = random_amplitudes(4, gen);
  return {v[0], v[1], v[2], v[3]};
}

inline double max_abs_diff(std::span<const Complex> a, std::span<const Complex> b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Max amplitude difference after removing the global phase of b relative to a.
inline double phase_free_diff(std::span<const Complex> a, std::span<const Complex> b) {
  Complex inner{0.0, 0.0};
  for (std::size_t i = 0; i < a.size(); ++i) inner += std::conj(b[i]) * a[i];
  const Complex phase = std::abs(inner) > 0.0 ? inner / std::abs(inner) : Complex{1.0, 0.0};
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - phase * b[i]));
  return m;
}

}  // namespace sbsa::test
