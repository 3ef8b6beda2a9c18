#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "sbsa/register.hpp"
#include "test_util.hpp"

using namespace sbsa;

namespace {

const double kS = std::numbers::sqrt2 / 2.0;

// Two-qubit kron(u, I) applied to (a1b1, a1b2, a2b1, a2b2); test-only oracle.
std::array<Complex, 4> apply_on_first(const Mat2& u, const std::array<Complex, 4>& v) {
  std::array<Complex, 4> out{};
  for (std::size_t ra = 0; ra < 2; ++ra) {
    for (std::size_t ca = 0; ca < 2; ++ca) {
      for (std::size_t b = 0; b < 2; ++b) out[2 * ra + b] += u[ra][ca] * v[2 * ca + b];
    }
  }
  return out;
}

// Written out from the operator definitions |i><j|, independently of gates::spatial.
Mat2 coding_matrix(SpatialUnitary u) {
  switch (u) {
    case SpatialUnitary::U1: return {{{1.0, 0.0}, {0.0, 1.0}}};
    case SpatialUnitary::U2: return {{{0.0, 1.0}, {1.0, 0.0}}};
    case SpatialUnitary::U3: return {{{1.0, 0.0}, {0.0, -1.0}}};
    case SpatialUnitary::U4: return {{{0.0, 1.0}, {-1.0, 0.0}}};
  }
  return {};
}

QuantumRegister spatial_qubit(std::array<Complex, 2> state) {
  QuantumRegister reg;
  reg.append({"a", SubsystemKind::spatial}, state);
  return reg;
}

}  // namespace

TEST_CASE("amplitude indexing is big-endian in label order") {
  QuantumRegister reg;
  reg.append({"first", SubsystemKind::spatial}, {0.0, 1.0});
  reg.append({"second", SubsystemKind::spin}, {1.0, 0.0});
  CHECK(reg.amplitude(2) == Complex{1.0, 0.0});
  CHECK(reg.mask("first") == 2);
  CHECK(reg.mask("second") == 1);
  CHECK_THROWS_AS(reg.append({"first", SubsystemKind::spin}, {1.0, 0.0}), RegisterError);
  CHECK_THROWS_AS(QuantumRegister({{"x", SubsystemKind::spin}}, {1.0, 0.0, 0.0}), RegisterError);
}

TEST_CASE("make_bell produces the four spatial Bell states") {
  const auto phi_plus = make_bell(BellState::phi_plus);
  CHECK(phi_plus.amplitude(0).real() == doctest::Approx(kS));
  CHECK(phi_plus.amplitude(3).real() == doctest::Approx(kS));
  CHECK(std::abs(phi_plus.amplitude(1)) + std::abs(phi_plus.amplitude(2)) == 0.0);

  const auto psi_minus = make_bell(BellState::psi_minus);
  CHECK(psi_minus.amplitude(1).real() == doctest::Approx(kS));
  CHECK(psi_minus.amplitude(2).real() == doctest::Approx(-kS));
  CHECK(std::abs(psi_minus.amplitude(0)) + std::abs(psi_minus.amplitude(3)) == 0.0);

  for (BellState s : kAllBellStates) {
    CHECK(make_bell(s).norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
    const auto with_pol = make_bell(s, std::array<Complex, 2>{1.0, 0.0});
    CHECK(with_pol.num_qubits() == 4);
    CHECK(with_pol.norm_squared() == doctest::Approx(1.0).epsilon(1e-15));
  }
}

TEST_CASE("parity classification of Bell states") {
  CHECK(is_even_parity(BellState::phi_plus));
  CHECK(is_even_parity(BellState::phi_minus));
  CHECK_FALSE(is_even_parity(BellState::psi_plus));
  CHECK_FALSE(is_even_parity(BellState::psi_minus));
  for (BellState s : kAllBellStates) CHECK(parse_bell_state(to_string(s)) == s);
  CHECK_FALSE(parse_bell_state("phi").has_value());
}

TEST_CASE("beam splitters map the Bell basis onto itself") {
  struct Row {
    BellState in;
    std::array<Complex, 4> out;  // c1d1, c1d2, c2d1, c2d2
  };
  const Row table[] = {
      {BellState::phi_plus, {kS, 0.0, 0.0, kS}},
      {BellState::phi_minus, {0.0, kS, kS, 0.0}},
      {BellState::psi_plus, {kS, 0.0, 0.0, -kS}},
      {BellState::psi_minus, {0.0, kS, -kS, 0.0}},
  };
  for (const auto& row : table) {
    auto reg = make_bell(row.in);
    apply_bs(reg, "a");
    apply_bs(reg, "b");
    CHECK(test::phase_free_diff(reg.amplitudes(), row.out) < 1e-12);
  }
}

TEST_CASE("beam splitter is an involution and requires a spatial qubit") {
  std::mt19937_64 gen(21);
  QuantumRegister reg({{"a", SubsystemKind::spatial}, {"e", SubsystemKind::spin}}, test::random_amplitudes(4, gen));
  const std::vector<Complex> before(reg.amplitudes().begin(), reg.amplitudes().end());
  apply_bs(reg, "a");
  apply_bs(reg, "a");
  CHECK(test::max_abs_diff(reg.amplitudes(), before) < 1e-12);
  CHECK_THROWS_AS(apply_bs(reg, "e"), RegisterError);
}

TEST_CASE("polarization to spatial conversion") {
  const std::array<Complex, 2> h = {kS, kS};
  const std::array<Complex, 2> v = {kS, -kS};

  SUBCASE("basis cases") {
    QuantumRegister reg;
    reg.append({"pol", SubsystemKind::polarization}, h);
    reg.append({"a", SubsystemKind::spatial}, {1.0, 0.0});
    pol_to_spatial(reg, "pol", "a");
    QuantumRegister expect;
    expect.append({"pol", SubsystemKind::polarization}, h);
    expect.append({"a", SubsystemKind::spatial}, {1.0, 0.0});
    CHECK(test::max_abs_diff(reg.amplitudes(), expect.amplitudes()) < 1e-12);

    QuantumRegister reg_v;
    reg_v.append({"pol", SubsystemKind::polarization}, v);
    reg_v.append({"a", SubsystemKind::spatial}, {1.0, 0.0});
    pol_to_spatial(reg_v, "pol", "a");
    QuantumRegister expect_v;
    expect_v.append({"pol", SubsystemKind::polarization}, h);
    expect_v.append({"a", SubsystemKind::spatial}, {0.0, 1.0});
    CHECK(test::max_abs_diff(reg_v.amplitudes(), expect_v.amplitudes()) < 1e-12);
  }

  SUBCASE("polarization Bell pair becomes a spatial Bell pair") {
    // (|HH> + |VV>)/sqrt2 over pol_a, pol_b, with fresh spatial slots a, b.
    std::vector<SubsystemLabel> labels = {{"pol_a", SubsystemKind::polarization},
                                          {"a", SubsystemKind::spatial},
                                          {"pol_b", SubsystemKind::polarization},
                                          {"b", SubsystemKind::spatial}};
    std::vector<Complex> amps(16);
    for (std::size_t pa = 0; pa < 2; ++pa) {
      for (std::size_t pb = 0; pb < 2; ++pb) {
        amps[(pa << 3) | (pb << 1)] = kS * (h[pa] * h[pb] + v[pa] * v[pb]);
      }
    }
    QuantumRegister reg(labels, amps);
    pol_to_spatial(reg, "pol_a", "a");
    pol_to_spatial(reg, "pol_b", "b");
    const auto expected = make_bell(BellState::phi_plus, h);
    CHECK(test::phase_free_diff(reg.amplitudes(), expected.amplitudes()) < 1e-12);

    Rng rng(1);
    CHECK(outcome_probabilities(reg, "pol_a", Basis::X)[0] == doctest::Approx(1.0).epsilon(1e-12));
    const auto m = measure(reg, "pol_b", Basis::X, rng);
    CHECK(m.outcome == 0);
    CHECK(m.probability == doctest::Approx(1.0).epsilon(1e-12));
  }

  SUBCASE("an occupied spatial slot is rejected") {
    QuantumRegister reg;
    reg.append({"pol", SubsystemKind::polarization}, h);
    reg.append({"a", SubsystemKind::spatial}, {kS, kS});
    CHECK_THROWS_AS(pol_to_spatial(reg, "pol", "a"), RegisterError);
  }
}

TEST_CASE("dense-coding unitaries take phi+ around the Bell basis") {
  const auto phi = bell_amplitudes(BellState::phi_plus);
  const std::pair<SpatialUnitary, BellState> cases[] = {{SpatialUnitary::U1, BellState::phi_plus},
                                                        {SpatialUnitary::U2, BellState::psi_plus},
                                                        {SpatialUnitary::U3, BellState::phi_minus},
                                                        {SpatialUnitary::U4, BellState::psi_minus}};
  for (const auto& [u, target] : cases) {
    const auto oracle = apply_on_first(coding_matrix(u), phi);
    CHECK(test::phase_free_diff(oracle, bell_amplitudes(target)) < 1e-12);

    auto reg = make_bell(BellState::phi_plus);
    apply_spatial_unitary(reg, "a", u);
    CHECK(test::max_abs_diff(reg.amplitudes(), oracle) < 1e-15);
  }
  // U4 lands on psi- with no extra phase.
  const auto u4 = apply_on_first(coding_matrix(SpatialUnitary::U4), phi);
  CHECK(test::max_abs_diff(u4, bell_amplitudes(BellState::psi_minus)) < 1e-15);

  QuantumRegister spin;
  spin.append({"e", SubsystemKind::spin}, {1.0, 0.0});
  CHECK_THROWS_AS(apply_spatial_unitary(spin, "e", SpatialUnitary::U2), RegisterError);
}

TEST_CASE("measurement") {
  Rng rng(5);
  SUBCASE("Z on mode1") {
    auto reg = spatial_qubit({1.0, 0.0});
    const auto m = measure(reg, "a", Basis::Z, rng);
    CHECK(m.outcome == 0);
    CHECK(m.probability == 1.0);
  }
  SUBCASE("X on (|1>+|2>)/sqrt2") {
    auto reg = spatial_qubit({kS, kS});
    const auto m = measure(reg, "a", Basis::X, rng);
    CHECK(m.outcome == 0);
    CHECK(m.probability == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("Z outcomes on phi+ are always equal") {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
      Rng r(seed);
      auto reg = make_bell(BellState::phi_plus);
      const auto a = measure(reg, "a", Basis::Z, r);
      const auto b = measure(reg, "b", Basis::Z, r);
      CHECK(a.outcome == b.outcome);
      CHECK(a.probability == doctest::Approx(0.5));
      CHECK(b.probability == doctest::Approx(1.0));
    }
  }
  SUBCASE("probabilities sum to one and collapse renormalizes") {
    std::mt19937_64 gen(22);
    for (int k = 0; k < 100; ++k) {
      QuantumRegister reg({{"p", SubsystemKind::polarization}, {"a", SubsystemKind::spatial}},
                          test::random_amplitudes(4, gen));
      for (Basis b : {Basis::Z, Basis::X, Basis::Y}) {
        const auto p = outcome_probabilities(reg, "p", b);
        CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
      }
      const auto p = outcome_probabilities(reg, "a", Basis::X);
      CHECK(p[0] + p[1] == doctest::Approx(1.0).epsilon(1e-12));
      measure(reg, "a", Basis::X, rng);
      CHECK(reg.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
    }
  }
  SUBCASE("sampling frequencies follow the Born rule") {
    const double c0 = std::sqrt(0.3);
    const double c1 = std::sqrt(0.7);
    int zeros = 0;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
      auto reg = spatial_qubit({c0, c1});
      if (measure(reg, "a", Basis::Z, rng).outcome == 0) ++zeros;
    }
    const double sigma = std::sqrt(0.3 * 0.7 / n);
    CHECK(std::abs(zeros / double(n) - 0.3) < 4 * sigma);
  }
  SUBCASE("errors") {
    QuantumRegister zero({{"a", SubsystemKind::spatial}}, {0.0, 0.0});
    CHECK_THROWS_AS(measure(zero, "a", Basis::Z, rng), RegisterError);
    auto reg = spatial_qubit({1.0, 0.0});
    CHECK_THROWS_AS(measure(reg, "a", Basis::Y, rng), RegisterError);
    CHECK_THROWS_AS(measure(reg, "zz", Basis::Z, rng), RegisterError);
  }
}

TEST_CASE("spin Hadamard") {
  QuantumRegister plus;
  plus.append({"e", SubsystemKind::spin}, {kS, kS});
  hadamard_spin(plus, "e");
  CHECK(std::abs(plus.amplitude(0) - 1.0) < 1e-15);
  CHECK(std::abs(plus.amplitude(1)) < 1e-15);

  QuantumRegister minus;
  minus.append({"e", SubsystemKind::spin}, {kS, -kS});
  hadamard_spin(minus, "e");
  CHECK(std::abs(minus.amplitude(0)) < 1e-15);
  CHECK(std::abs(minus.amplitude(1) - 1.0) < 1e-15);

  std::mt19937_64 gen(23);
  for (int k = 0; k < 50; ++k) {
    QuantumRegister reg({{"a", SubsystemKind::spatial}, {"e", SubsystemKind::spin}}, test::random_amplitudes(4, gen));
    const std::vector<Complex> before(reg.amplitudes().begin(), reg.amplitudes().end());
    hadamard_spin(reg, "e");
    hadamard_spin(reg, "e");
    CHECK(test::max_abs_diff(reg.amplitudes(), before) < 1e-12);
    CHECK_THROWS_AS(hadamard_spin(reg, "a"), RegisterError);
  }
}

TEST_CASE("phase-flip correction") {
  const Complex alpha{0.6, 0.0};
  const Complex beta{0.0, 0.8};
  QuantumRegister reg;
  reg.append({"p", SubsystemKind::polarization}, {alpha, -beta});
  phase_flip_correction(reg, "p");
  CHECK(std::abs(reg.amplitude(0) - alpha) < 1e-15);
  CHECK(std::abs(reg.amplitude(1) - beta) < 1e-15);

  QuantumRegister r;
  r.append({"p", SubsystemKind::polarization}, {1.0, 0.0});
  phase_flip_correction(r, "p");
  CHECK(r.amplitude(0) == Complex{1.0, 0.0});

  phase_flip_correction(reg, "p");
  phase_flip_correction(reg, "p");
  CHECK(std::abs(reg.amplitude(1) - beta) < 1e-15);

  QuantumRegister spin;
  spin.append({"e", SubsystemKind::spin}, {1.0, 0.0});
  CHECK_THROWS_AS(phase_flip_correction(spin, "e"), RegisterError);
}

TEST_CASE("named unitaries preserve the norm") {
  std::mt19937_64 gen(24);
  const std::vector<SubsystemLabel> labels = {{"p", SubsystemKind::polarization},
                                              {"a", SubsystemKind::spatial},
                                              {"e", SubsystemKind::spin},
                                              {"b", SubsystemKind::spatial}};
  for (int k = 0; k < 100; ++k) {
    QuantumRegister reg(labels, test::random_amplitudes(16, gen));
    apply_bs(reg, "a");
    for (auto u : {SpatialUnitary::U1, SpatialUnitary::U2, SpatialUnitary::U3, SpatialUnitary::U4}) {
      apply_spatial_unitary(reg, "b", u);
    }
    hadamard_spin(reg, "e");
    phase_flip_correction(reg, "p");
    CHECK(reg.norm_squared() == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("release drops a qubit known to be in a given state") {
  std::mt19937_64 gen(25);
  const auto body = test::random_amplitudes(4, gen);
  QuantumRegister reg({{"a", SubsystemKind::spatial}, {"b", SubsystemKind::spatial}}, body);
  const auto v = basis_vector(Basis::Y, 1);
  reg.append({"p", SubsystemKind::polarization}, v);
  reg.release("p", v);
  CHECK(reg.num_qubits() == 2);
  CHECK(test::max_abs_diff(reg.amplitudes(), body) < 1e-15);

  // Releasing a middle qubit.
  QuantumRegister mid({{"a", SubsystemKind::spatial}}, {body[0], body[1]});
  mid.append({"x", SubsystemKind::spin}, {0.0, 1.0});
  mid.append({"b", SubsystemKind::spatial}, {1.0, 0.0});
  mid.release("x", {0.0, 1.0});
  CHECK(mid.amplitude(0) == body[0]);
  CHECK(mid.amplitude(2) == body[1]);
}
