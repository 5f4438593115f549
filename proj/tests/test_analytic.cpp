#include "ddcorr/analytic.hpp"

#include "oracles.hpp"

#include "doctest.h"

#include <cmath>
#include <numbers>

using namespace ddcorr;

namespace {

constexpr double kPi = std::numbers::pi;

TargetCluster spin_one_target() { return spin_one_preset(0.20, 0.14, 5.0 * std::sqrt(2.0)); }

TargetCluster ladder(std::vector<double> f, std::vector<std::optional<double>> k) {
  return ladder_preset(f, k);
}

TargetCluster ring_target(double phase = 0.0) {
  const std::array<PhasedCoupling, 3> k{{{5.0, phase}, {5.04, -phase}, {4.98, 2 * phase}}};
  return ring_preset(0.20, 0.14, k);
}

double delta_of(const TargetCluster& c, std::size_t m, std::size_t n) { return transition(c, m, n).delta; }

}  // namespace

TEST_CASE("magnus rotation") {
  const auto c = ladder({0.2, 0.14, 0.3}, {5.0, 5.04, 4.0});
  CHECK((magnus_rotation(c, 0, 1, 0.0) - CMatrix::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
  const double delta = delta_of(c, 1, 0);
  for (double n : {1.0, 17.0, 63.5}) {
    const CMatrix u = magnus_rotation(c, 0, 1, 2 * n);
    CHECK(u.trace().real() == doctest::Approx(4 - 2 + 2 * std::cos(2 * n * delta)));
    CHECK((u - oracle::rotation(c, 0, 1, 2 * n)).cwiseAbs().maxCoeff() < 1e-13);
    CHECK(unitarity_error(u) < 1e-14);
  }
  // explicit 2x2 block on the (0, 1) pair, untouched elsewhere
  const double n = 30.0;
  const CMatrix u = magnus_rotation(c, 0, 1, n);
  const Complex ratio = c.coupling()(0, 1) / (c.energies()(0) - c.energies()(1));
  const double a = n * std::abs(ratio);
  const Complex e = ratio / std::abs(ratio);
  CHECK(std::abs(u(0, 0) - std::cos(a)) < 1e-15);
  CHECK(std::abs(u(0, 1) - Complex(0, -1) * e * std::sin(a)) < 1e-15);
  CHECK(std::abs(u(1, 0) - Complex(0, -1) * std::conj(e) * std::sin(a)) < 1e-15);
  CHECK(std::abs(u(2, 2) - 1.0) == 0.0);
  CHECK(std::abs(u(0, 2)) == 0.0);

  CHECK_THROWS_AS(magnus_rotation(spin_one_target(), 2, 0, 1.0), std::invalid_argument);
}

TEST_CASE("one-dimensional dip") {
  CHECK(dip_1d(3, 0.025, 0) == 1.0);
  CHECK(dip_1d(3, 0.025, 63) == doctest::Approx(-1.0 / 3.0).epsilon(1e-3));
  CHECK(dip_1d(3, 0.025, 20) == doctest::Approx((1 + 2 * std::cos(1.0)) / 3));
  CHECK(dip_1d(3, 0.025, 20) == doctest::Approx(0.6935).epsilon(1e-4));
  CHECK_THROWS_AS(dip_1d(1, 0.025, 1), std::invalid_argument);
  CHECK_THROWS_AS(dip_1d(3, 0.0, 1), std::invalid_argument);
}

TEST_CASE("two-dimensional dips") {
  const DipParams p{4, {0.025, 0.036}, {63, 44}};
  CHECK(dip_2d(topology::Uncorrelated{}, p) == doctest::Approx(-0.9997).epsilon(1e-4));
  const DipParams q{3, {0.025, 0.036}, {63, 44}};
  CHECK(dip_2d(topology::Correlated{}, q) == doctest::Approx(-1.0 / 3.0).epsilon(1e-3));

  const DipParams two{0, {0.03, 0.05}, {7, 11}};
  CHECK(dip_2d(topology::IndependentMolecules{2, 2}, two) ==
        doctest::Approx(std::cos(2 * 7 * 0.03) * std::cos(2 * 11 * 0.05)));
  const DipParams zero{0, {0.03, 0.05}, {0, 0}};
  CHECK(dip_2d(topology::IndependentMolecules{2, 2}, zero) == 1.0);

  CHECK_THROWS_AS(dip_2d(topology::Uncorrelated{}, q), std::invalid_argument);
  CHECK_THROWS_AS(dip_2d(topology::Correlated{}, DipParams{2, {0.1, 0.1}, {1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(dip_2d(topology::Correlated{}, DipParams{3, {0.1}, {1}}), std::invalid_argument);
}

TEST_CASE("two-dimensional trace equals closed forms") {
  const auto v = spin_one_target();
  const Complex t = dip_trace_2d(v, {2, 1}, {1, 0}, 63, 44);
  const double closed = dip_2d(topology::Correlated{}, {3, {delta_of(v, 2, 1), delta_of(v, 1, 0)}, {63, 44}});
  CHECK(t.real() == doctest::Approx(closed).epsilon(1e-12));
  CHECK(t.real() == doctest::Approx(-1.0 / 3.0).epsilon(1e-3));
  CHECK(std::abs(dip_trace_2d(v, {2, 1}, {1, 0}, 0, 0) - Complex(1, 0)) < 1e-15);

  const auto u = ladder({0.2, 0.3, 0.14}, {5.0, std::nullopt, 5.04});
  const double d1 = delta_of(u, 1, 0);
  const double d2 = delta_of(u, 3, 2);
  for (int n1 = 0; n1 <= 130; n1 += 13) {
    for (int n2 = 0; n2 <= 90; n2 += 9) {
      const Complex tr = dip_trace_2d(u, {0, 1}, {2, 3}, n1, n2);
      CHECK(std::abs(tr.real() - dip_2d(topology::Uncorrelated{}, {4, {d1, d2}, {double(n1), double(n2)}})) < 1e-12);
      CHECK(std::abs(tr - oracle::trace_2d(u, {0, 1}, {2, 3}, n1, n2)) < 1e-12);
    }
  }
}

TEST_CASE("three-dimensional closed forms") {
  const DipParams unlinked{5, {0.025, 0.036, 0.083}, {40, 0, 0}};
  CHECK(dip_3d(topology::UnlinkedLadder{}, unlinked) == doctest::Approx(dip_1d(5, 0.025, 40)));

  const DipParams linked{4, {0.025, 0.036, 0.083}, {40, 0, 9}};
  CHECK(dip_3d(topology::LinkedLadder{}, linked) ==
        doctest::Approx((4 - 4 + 2 * std::cos(80 * 0.025) + 2 * std::cos(18 * 0.083)) / 4));

  const DipParams zero{6, {0.025, 0.036, 0.083}, {0, 0, 0}};
  for (const Topology3D& t : {Topology3D{topology::Uncorrelated3{}}, Topology3D{topology::Ring{}},
                              Topology3D{topology::Star{}}, Topology3D{topology::LinkedLadder{}},
                              Topology3D{topology::UnlinkedLadder{}},
                              Topology3D{topology::Independent3{2, 3, 4}}}) {
    CHECK(dip_3d(t, zero) == doctest::Approx(1.0));
  }

  CHECK_THROWS_AS(dip_3d(topology::Uncorrelated3{}, {5, {0.1, 0.1, 0.1}, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(dip_3d(topology::Ring{}, {2, {0.1, 0.1, 0.1}, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(dip_3d(topology::Star{}, {3, {0.1, 0.1, 0.1}, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(dip_3d(topology::LinkedLadder{}, {3, {0.1, 0.1, 0.1}, {1, 1, 1}}), std::invalid_argument);
  CHECK_THROWS_AS(dip_3d(topology::UnlinkedLadder{}, {4, {0.1, 0.1, 0.1}, {1, 1, 1}}), std::invalid_argument);
}

TEST_CASE("three-dimensional trace on the ring target") {
  const auto r = ring_target();
  const std::array<LevelPair, 3> t{{{2, 0}, {1, 0}, {2, 1}}};
  const double d1 = delta_of(r, 2, 0), d2 = delta_of(r, 1, 0), d3 = delta_of(r, 2, 1);
  CHECK(std::abs(dip_trace_3d(r, t, 0, 0, 0) - Complex(1, 0)) < 1e-15);
  for (int n1 = 0; n1 <= 126; n1 += 14) {
    for (int n2 = 0; n2 <= 88; n2 += 11) {
      const Complex tr = dip_trace_3d(r, t, n1, n2, 12);
      const double closed = dip_3d(topology::Ring{}, {3, {d1, d2, d3}, {double(n1), double(n2), 12.0}});
      CHECK(std::abs(tr.real() - closed) < 1e-10);
      CHECK(std::abs(tr - oracle::trace_3d(r, {{{2, 0}, {1, 0}, {2, 1}}}, n1, n2, 12)) < 1e-12);
    }
    // middle block off: same as the 2D trace of blocks one and three
    CHECK(std::abs(dip_trace_3d(r, t, n1, 0, 7) - dip_trace_2d(r, t[0], t[2], n1, 7)) < 1e-14);
  }
}

TEST_CASE("pulse period") {
  CHECK(pulse_period(0.025).period == doctest::Approx(125.66).epsilon(1e-4));
  CHECK(pulse_period(0.025).even == 126);
  CHECK(pulse_period(0.036).period == doctest::Approx(87.27).epsilon(1e-4));
  CHECK(pulse_period(0.036).even == 88);
  CHECK(pulse_period(kPi / 100).period == doctest::Approx(100.0));
  CHECK(pulse_period(kPi / 100).even == 100);
  CHECK_THROWS_AS(pulse_period(0.0), std::invalid_argument);
}

TEST_CASE("quantized minima") {
  CHECK(minima(DipFamily::uncorrelated_2d, 4) == -1.0);
  CHECK(minima(DipFamily::correlated_2d, 4) == 0.0);
  CHECK(minima(DipFamily::one_d, 3) == doctest::Approx(-1.0 / 3.0));
  CHECK_THROWS_AS(minima(DipFamily::uncorrelated_2d, 3), std::invalid_argument);
  CHECK_THROWS_AS(minima(DipFamily::correlated_2d, 2), std::invalid_argument);
  CHECK(minimum_dimension(Topology2D{topology::Uncorrelated{}}) == 4);
  CHECK(minimum_dimension(Topology3D{topology::UnlinkedLadder{}}) == 5);
}

TEST_CASE("topology names") {
  for (const char* name : {"1d", "2d-uncorrelated", "2d-correlated", "3d-uncorrelated", "3d-ring",
                           "3d-star", "3d-linked-ladder", "3d-unlinked-ladder"}) {
    CHECK(topology_name(parse_topology(name)) == name);
  }
  const std::vector<int> dims{2, 3};
  CHECK(topology_name(parse_topology("2d-independent", dims)) == "2d-independent");
  CHECK_THROWS_AS(parse_topology("2d-independent"), std::invalid_argument);
  CHECK_THROWS_AS(parse_topology("4d-hypercube"), std::invalid_argument);
  CHECK(block_count(parse_topology("3d-ring")) == 3);

  const DipParams p{3, {0.025}, {63}};
  CHECK(dip(topology::Single{}, p) == dip_1d(3, 0.025, 63));
}
