// Acceptance suite: one line per criterion, nonzero exit if any fails.

#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "sbsa/bsa.hpp"
#include "sbsa/qsdc.hpp"
#include "sbsa/sweep.hpp"

using namespace sbsa;

namespace {

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Outcome table_determinism() {
  const CavityParams params;
  double worst_split = 0.0;
  std::size_t wrong = 0;
  for (BellState s : kAllBellStates) {
    std::map<DetectorPair, std::size_t> clicks;
    std::size_t trials = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      Rng rng(seed);
      for (int t = 0; t < 100; ++t, ++trials) {
        const auto rec = analyze(s, params, true, rng);
        if (rec.inferred != s) ++wrong;
        ++clicks[rec.detectors];
      }
    }
    const bool even = s == BellState::phi_plus || s == BellState::psi_plus;
    const auto first = even ? DetectorPair::c1d1 : DetectorPair::c1d2;
    const auto second = even ? DetectorPair::c2d2 : DetectorPair::c2d1;
    if (clicks[first] + clicks[second] != trials) ++wrong;
    worst_split = std::max(worst_split, std::abs(clicks[first] / double(trials) - 0.5));
  }
  return {wrong == 0 && worst_split <= 0.05,
          fmt("misclassified=%zu, worst detector split deviation=%.4f (limit 0.05)", wrong, worst_split)};
}

Outcome bs_table() {
  const double h = std::numbers::sqrt2 / 2.0;
  const std::pair<BellState, std::array<Complex, 4>> table[] = {
      {BellState::phi_plus, {h, 0.0, 0.0, h}},
      {BellState::phi_minus, {0.0, h, h, 0.0}},
      {BellState::psi_plus, {h, 0.0, 0.0, -h}},
      {BellState::psi_minus, {0.0, h, -h, 0.0}},
  };
  double worst = 0.0;
  for (const auto& [in, out] : table) {
    auto reg = make_bell(in);
    apply_bs(reg, "a");
    apply_bs(reg, "b");
    // Remove the global phase, then compare amplitude by amplitude.
    Complex inner{0.0, 0.0};
    for (std::size_t i = 0; i < 4; ++i) inner += std::conj(out[i]) * reg.amplitude(i);
    const Complex phase = inner / std::abs(inner);
    for (std::size_t i = 0; i < 4; ++i) worst = std::max(worst, std::abs(reg.amplitude(i) - phase * out[i]));
  }
  return {worst <= 1e-12, fmt("max amplitude error=%.3g (limit 1e-12)", worst)};
}

Outcome operating_points() {
  struct Point {
    double g, ks, f1, f1_tol, eta1, eta1_tol;
  };
  const Point points[] = {
      {2.4, 0.0, 0.9999, 0.0001, 0.981, 0.001},
      {2.4, 0.7, 0.696, 0.005, 0.532, 0.005},
      {1.0, 0.7, 0.713, 0.005, 0.478, 0.005},
  };
  bool ok = true;
  std::string detail;
  for (const auto& p : points) {
    const auto q = quality(CavityParams::from_ratios(p.g, p.ks, 0.1, 0.5));
    ok = ok && std::abs(q.f1 - p.f1) <= p.f1_tol && std::abs(q.eta1 - p.eta1) <= p.eta1_tol;
    detail += fmt("[g=%.1f ks=%.1f F1=%.4f%% eta1=%.2f%%] ", p.g, p.ks, 100 * q.f1, 100 * q.eta1);
  }
  return {ok, detail};
}

Outcome ideal_limit() {
  const auto q = quality_from_magnitudes(1.0, 1.0);
  return {q.f1 == 1.0 && q.f2 == 1.0 && q.eta1 == 1.0 && q.eta2 == 1.5,
          fmt("F1=%.17g F2=%.17g eta1=%.17g eta2=%.17g", q.f1, q.f2, q.eta1, q.eta2)};
}

Outcome parity_oracle() {
  std::mt19937_64 gen(2024);
  std::normal_distribution<double> n(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    std::array<Complex, 4> s;
    for (auto& a : s) a = {n(gen), n(gen)};
    const double total = std::norm(s[0]) + std::norm(s[1]) + std::norm(s[2]) + std::norm(s[3]);
    const double odd = (std::norm(s[1]) + std::norm(s[2])) / total;
    auto reg = make_analyzer_input(std::span<const Complex, 4>(s));
    reg.normalize();
    parity_qnd(reg, ids::spin, CavityParams{}, true);
    worst = std::max(worst, std::abs(spin_change_probability(reg, ids::spin, CavityParams{}, true) - odd));
  }
  return {worst <= 1e-9, fmt("max |P(changed) - odd weight|=%.3g (limit 1e-9)", worst)};
}

Outcome qsdc_round_trip() {
  std::size_t failures = 0;
  double worst_qber = 0.0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    std::mt19937_64 gen(seed * 7919);
    QsdcConfig c;
    for (int i = 0; i < 256; ++i) c.message_bits += (gen() & 1) ? '1' : '0';
    c.seed = seed;
    const auto r = run_session(c);
    if (r.aborted || r.decoded_bits != c.message_bits || r.phase1_qber != 0.0) ++failures;
    worst_qber = std::max(worst_qber, r.phase1_qber);
  }
  return {failures == 0, fmt("failed sessions=%zu/10, max phase-1 QBER=%.3g", failures, worst_qber)};
}

Outcome intercept_resend() {
  double sum = 0.0;
  double worst = 0.0;
  std::size_t min_samples = SIZE_MAX;
  std::size_t aborted = 0;
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    QsdcConfig c;
    c.message_bits = std::string(256, '0');
    c.pair_count = 100000;
    c.sample_fraction = 0.1;
    c.eve = {EveModel::Kind::intercept_resend, 1.0};
    c.qber_abort_threshold = 0.11;
    c.seed = seed;
    const auto r = run_session(c);
    sum += r.phase1_qber;
    worst = std::max(worst, std::abs(r.phase1_qber - 0.25));
    min_samples = std::min(min_samples, r.phase1_samples);
    if (r.aborted) ++aborted;
  }
  const double mean = sum / 30.0;
  const bool ok = min_samples >= 10000 && worst <= 0.03 && std::abs(mean - 0.25) <= 0.01 && aborted == 30;
  return {ok, fmt("samples/run>=%zu, max |QBER-0.25|=%.4f, mean QBER=%.4f, aborted=%zu/30", min_samples, worst, mean,
                  aborted)};
}

Outcome decoherence() {
  const double at_one = decoherence_factor({1.0, 1.0});
  const double expected = (1.0 + std::exp(-1.0)) / 2.0;
  const double small = decoherence_factor({1e-6, 1.0});
  const double large = decoherence_factor({1e3, 1.0});
  const bool ok = std::abs(at_one - expected) <= 1e-12 && std::abs(small - 1.0) <= 1e-6 && std::abs(large - 0.5) <= 1e-12;
  return {ok, fmt("F'(1)=%.15f, F'(1e-6)=%.9f, F'(1e3)=%.15f", at_one, small, large)};
}

Outcome leakage_ordering() {
  SweepSpec spec;
  spec.ks_over_k = {0.0, 0.7};
  const auto rows = run_sweep(spec);
  std::size_t violations = 0;
  for (std::size_t i = 0; i < spec.steps; ++i) {
    const auto& clean = rows[i];
    const auto& leaky = rows[spec.steps + i];
    if (!(leaky.eta1 < clean.eta1)) ++violations;
    if (clean.g_over_ktot == 0.0) {
      // Hot and cold reflections coincide, so both fidelities are 1.
      if (std::abs(leaky.f1 - clean.f1) > 1e-12) ++violations;
    } else if (!(leaky.f1 < clean.f1)) {
      ++violations;
    }
  }
  return {violations == 0, fmt("grid points=%zu, violations=%zu (F1 tie allowed at g=0)", spec.steps, violations)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"ideal Bell-state discrimination", table_determinism},
      {"beam-splitter amplitude table", bs_table},
      {"operating points", operating_points},
      {"ideal-limit identities", ideal_limit},
      {"parity-check oracle equivalence", parity_oracle},
      {"QSDC round trip", qsdc_round_trip},
      {"intercept-resend detection", intercept_resend},
      {"decoherence factor", decoherence},
      {"side-leakage ordering on default grid", leakage_ordering},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    const auto result = check();
    std::printf("[%s] %s: %s\n", result.pass ? "PASS" : "FAIL", name, result.detail.c_str());
    if (!result.pass) ++failed;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
