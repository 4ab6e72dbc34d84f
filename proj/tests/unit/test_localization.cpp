#include <doctest.h>

#include <cmath>
#include <random>

#include "fraclap/errors.hpp"
#include "fraclap/fractional_laplacian.hpp"
#include "fraclap/kernel.hpp"
#include "fraclap/localization.hpp"

using namespace fraclap;

namespace {

HamiltonianConfig make_config(double s, double c, std::uint64_t seed, std::int64_t w,
                              std::int64_t r) {
  return HamiltonianConfig{s, r, sample_disorder(c, seed, w), Boundary::zero_extension};
}

Sequence random_sequence(std::mt19937_64& rng, int length, int shift) {
  std::uniform_real_distribution<double> value(-1.0, 1.0);
  std::vector<double> v(static_cast<std::size_t>(length));
  for (double& x : v) {
    x = value(rng);
  }
  return Sequence(shift, std::move(v));
}

Sequence reflected(const Sequence& u) {
  std::vector<double> v(u.values().rbegin(), u.values().rend());
  return Sequence(-u.last(), std::move(v));
}

}  // namespace

TEST_CASE("disorder sampling") {
  const auto zero = sample_disorder(0.0, 99, 32);
  for (double e : zero.potential) {
    CHECK(e == 0.0);
  }
  const auto d = sample_disorder(1.0, 42, 64);
  CHECK(d.potential.size() == 129);
  double lo = 1.0, hi = -1.0, mean = 0.0;
  for (double e : d.potential) {
    CHECK(e >= -0.5);
    CHECK(e <= 0.5);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
    mean += e;
  }
  CHECK(hi - lo > 0.5);
  CHECK(std::abs(mean / 129.0) < 0.15);

  const auto wide = sample_disorder(1.0, 42, 128);
  for (std::int64_t n = -64; n <= 64; ++n) {
    CHECK(d.at(n) == wide.at(n));
  }
  const auto again = sample_disorder(1.0, 42, 64);
  CHECK(again.potential == d.potential);
  const auto other = sample_disorder(1.0, 43, 64);
  CHECK(other.potential != d.potential);
  CHECK_THROWS_AS(sample_disorder(-1.0, 1, 8), DomainError);
  CHECK_THROWS_AS(sample_disorder(1.0, 1, 0), DomainError);
}

TEST_CASE("disorder sample statistics") {
  // Uniform on [-c/2, c/2]: variance c^2 / 12.
  const auto d = sample_disorder(2.0, 7, 50000);
  double sum = 0.0, sq = 0.0;
  for (double e : d.potential) {
    sum += e;
    sq += e * e;
  }
  const double n = static_cast<double>(d.potential.size());
  CHECK(std::abs(sum / n) < 0.01);
  CHECK(sq / n == doctest::Approx(4.0 / 12.0).epsilon(0.02));
}

TEST_CASE("hamiltonian configuration checks") {
  auto cfg = make_config(0.5, 1.0, 1, 16, 32);
  CHECK_THROWS_AS(cfg.validate(), DomainError);
  cfg = make_config(0.5, 1.0, 1, 16, 8);
  CHECK_NOTHROW(cfg.validate());
  const Hamiltonian h(cfg);
  CHECK_THROWS_AS(h.apply(delta(17)), SupportOverflowError);
  CHECK_THROWS_AS(Hamiltonian(cfg, Hamiltonian::make_stencil(0.5, 4)), DomainError);
}

TEST_CASE("hamiltonian applications") {
  // c = 0, s = 1 reduces to -Delta.
  const auto lap = apply_hamiltonian(delta(0), make_config(1.0, 0.0, 1, 16, 4));
  CHECK(lap.result.normalized() == Sequence(-1, {-1.0, 2.0, -1.0}));

  // Diagonal entry A_s + eps_0.
  const auto cfg = make_config(0.7, 1.0, 5, 32, 8);
  const auto h0 = apply_hamiltonian(delta(0), cfg);
  CHECK(h0.result(0) == doctest::Approx(kernel_sum(0.7) + cfg.disorder.at(0)).epsilon(1e-14));
  CHECK(h0.result(3) == doctest::Approx(-kernel_value(0.7, 3)).epsilon(1e-14));

  // Zero potential: identical to the operator on interior supports.
  std::mt19937_64 rng(51);
  const Sequence u = random_sequence(rng, 9, -4);
  OperatorSpec spec;
  spec.s = 0.7;
  spec.radius = 8;
  const auto free = apply_hamiltonian(u, make_config(0.7, 0.0, 1, 64, 8));
  CHECK(sup_distance(free.result, apply_fractional(u, spec).result) <= 1e-15);
  CHECK(free.clipped_bound == 0.0);
  CHECK(free.truncation_bound == doctest::Approx(kernel_tail_bound(0.7, 8) * u.sup_norm()));
}

TEST_CASE("clipped mass certificate bounds the dropped values") {
  const double s = 0.6;
  const auto cfg = make_config(s, 0.0, 1, 20, 20);
  const Sequence u(15, {0.3, -1.0, 0.8});
  const auto clipped = apply_hamiltonian(u, cfg);
  CHECK(clipped.result.last() == 20);
  CHECK(clipped.clipped_bound > 0.0);
  // Values beyond the window from an unclipped evaluation.
  OperatorSpec spec;
  spec.s = s;
  spec.radius = 40;
  const auto full = apply_fractional(u, spec).result;
  double dropped = 0.0;
  for (std::int64_t n = 21; n <= full.last(); ++n) {
    dropped = std::max(dropped, std::abs(full(n)));
  }
  CHECK(dropped <= clipped.clipped_bound);
  CHECK(clipped.result.first() == -5);
  for (std::int64_t n = -5; n <= 20; ++n) {
    CHECK(clipped.result(n) == doctest::Approx(full(n)).epsilon(1e-12));
  }
}

TEST_CASE("self-adjointness") {
  std::mt19937_64 rng(52);
  for (double s : {0.3, 1.0, 1.7}) {
    const auto cfg = make_config(s, 2.0, 9, 64, 64);
    const Hamiltonian h(cfg);
    for (int trial = 0; trial < 10; ++trial) {
      const Sequence u = random_sequence(rng, 21, -10);
      const Sequence v = random_sequence(rng, 17, -8);
      const double lhs = inner(h.apply(u).result, v);
      const double rhs = inner(u, h.apply(v).result);
      CHECK(std::abs(lhs - rhs) <= 1e-9 * std::max(std::abs(lhs), 1e-12));
    }
  }
}

TEST_CASE("orbit basis") {
  // Kernel radius = W: H is one fixed matrix on the window.
  const auto cfg = make_config(0.5, 1.0, 3, 64, 64);
  const OrbitBasis one = orbit_basis(cfg, 1);
  REQUIRE(one.vectors.size() == 1);
  CHECK(one.vectors[0] == delta(0));
  CHECK(one.raw_norms == std::vector<double>{1.0});

  const OrbitBasis b = orbit_basis(cfg, 6);
  REQUIRE(b.vectors.size() == 6);
  for (std::size_t i = 0; i < b.vectors.size(); ++i) {
    for (std::size_t j = 0; j < b.vectors.size(); ++j) {
      const double g = inner(b.vectors[i], b.vectors[j]);
      CHECK(std::abs(g - (i == j ? 1.0 : 0.0)) <= 1e-10);
    }
  }
  // Raw norms against explicit powers H^k delta_0.
  const Hamiltonian h(cfg);
  Sequence power = delta(0);
  for (std::size_t k = 0; k < b.raw_norms.size(); ++k) {
    CHECK(b.raw_norms[k] == doctest::Approx(norm(power)).epsilon(1e-10));
    power = h.apply(power).result;
  }
  // Growth bound.
  for (std::size_t k = 1; k < b.raw_norms.size(); ++k) {
    CHECK(b.raw_norms[k] <= h.norm_bound() * b.raw_norms[k - 1]);
  }
  CHECK_THROWS_AS(orbit_basis(cfg, 0), DomainError);
}

TEST_CASE("orbit basis detects an invariant subspace") {
  // c = 0, s = 1 on a window of radius 2: the even sector has dimension 3.
  const auto cfg = make_config(1.0, 0.0, 1, 2, 1);
  const OrbitBasis b = orbit_basis(cfg, 10);
  CHECK(b.vectors.size() == 3);
}

TEST_CASE("parity at zero disorder") {
  for (double s : {1.0, 0.5, 2.3}) {
    const auto cfg = make_config(s, 0.0, 1, 64, 4);
    const OrbitBasis b = orbit_basis(cfg, 8);
    for (const auto& v : b.vectors) {
      CHECK(sup_distance(v, reflected(v)) <= 1e-12);
    }
    const Probe odd = parse_probe("odd");
    for (double r : krylov_residual_profile(odd.vector, b, 8)) {
      CHECK(std::abs(r - 1.0) <= 1e-10);
    }
  }
}

TEST_CASE("krylov residual") {
  const auto cfg = make_config(0.8, 1.5, 11, 64, 8);
  const OrbitBasis b = orbit_basis(cfg, 6);
  CHECK(krylov_residual(b.vectors[0], b) <= 1e-10);
  CHECK(krylov_residual(b.vectors[4], b) <= 1e-10);
  CHECK_THROWS_AS(krylov_residual(delta(0).scaled(2.0), b), DomainError);

  const Probe even = parse_probe("even");
  const auto profile = krylov_residual_profile(even.vector, b, 6);
  REQUIRE(profile.size() == 6);
  for (std::size_t d = 1; d < profile.size(); ++d) {
    CHECK(profile[d] <= profile[d - 1] + 1e-15);
  }
  CHECK(profile.back() == doctest::Approx(krylov_residual(even.vector, b)).epsilon(1e-12));
  // Depths past an early stop repeat the last value.
  const auto long_profile = krylov_residual_profile(even.vector, b, 9);
  CHECK(long_profile[8] == long_profile[5]);
}

TEST_CASE("probes") {
  CHECK(parse_probe("odd").vector(1) == doctest::Approx(std::sqrt(0.5)));
  CHECK(parse_probe("odd").vector(-1) == doctest::Approx(-std::sqrt(0.5)));
  CHECK(parse_probe("even").vector(-1) == parse_probe("even").vector(1));
  CHECK(parse_probe("delta:-3").vector == delta(-3));
  CHECK(parse_probe("delta:5").id == "delta:5");
  CHECK_THROWS_AS(parse_probe("delta:"), ParseError);
  CHECK_THROWS_AS(parse_probe("delta:x"), ParseError);
  CHECK_THROWS_AS(parse_probe("triangle"), ParseError);
}

TEST_CASE("evolution") {
  const auto cfg = make_config(1.0, 0.0, 1, 64, 4);
  const Hamiltonian h(cfg);
  CHECK(evolve(delta(0), h, 0.0, 0.1).state == delta(0));
  CHECK_THROWS_AS(evolve(delta(0), h, 1.0, 1.0), StabilityError);
  CHECK_THROWS_AS(evolve(delta(0), h, 1.0, -0.1), DomainError);
  CHECK(stability_limit(cfg) == doctest::Approx(0.25));

  // u' = Delta u from delta_0 is the heat semigroup.
  const auto minus = evolve(delta(0), h, 1.0, 0.05, EvolutionSign::minus);
  CHECK(minus.steps == 20);
  CHECK(sup_distance(minus.state, heat_semigroup(delta(0), 1.0, 40)) <= 1e-6);
  double mass = 0.0;
  for (double x : minus.state.values()) {
    mass += x;
  }
  CHECK(std::abs(mass - 1.0) <= 1e-12);

  // Small times: the state barely moves.
  CHECK(sup_distance(evolve(delta(0), h, 1e-6, 1e-6).state, delta(0)) <= 1e-5);
}

TEST_CASE("evolution is fourth order") {
  const auto cfg = make_config(0.6, 1.0, 2, 64, 32);
  const Hamiltonian h(cfg);
  const double t = 0.5;
  const auto u1 = evolve(delta(0), h, t, 0.1).state;
  const auto u2 = evolve(delta(0), h, t, 0.05).state;
  const auto u3 = evolve(delta(0), h, t, 0.025).state;
  const double ratio = sup_distance(u1, u2) / sup_distance(u2, u3);
  CHECK(ratio == doctest::Approx(16.0).epsilon(0.2));
}

TEST_CASE("monte carlo ensemble") {
  EnsembleTemplate params;
  params.s = 1.0;
  params.amplitude = 0.0;
  params.window_radius = 64;
  params.kernel_radius = 4;
  const std::vector<Probe> probes{parse_probe("odd"), parse_probe("even")};
  const std::vector<std::uint64_t> seeds{7};
  const auto report = monte_carlo(params, seeds, 5, probes);
  REQUIRE(report.rows.size() == 10);
  for (const auto& row : report.rows) {
    if (row.probe_id == "odd") {
      CHECK(std::abs(row.residual - 1.0) <= 1e-10);
    }
  }
  // Matches a single direct orbit run.
  const OrbitBasis b = orbit_basis(make_config(1.0, 0.0, 7, 64, 4), 5);
  const auto direct = krylov_residual_profile(probes[1].vector, b, 5);
  for (int d = 0; d < 5; ++d) {
    CHECK(report.rows[static_cast<std::size_t>(5 + d)].residual == direct[static_cast<std::size_t>(d)]);
  }

  params.amplitude = 1.0;
  params.s = 0.5;
  std::vector<std::uint64_t> many;
  for (std::uint64_t s = 1; s <= 6; ++s) {
    many.push_back(s);
  }
  const auto serial = monte_carlo(params, many, 4, probes, 1);
  const auto parallel = monte_carlo(params, many, 4, probes, 4);
  REQUIRE(serial.rows.size() == 6 * 2 * 4);
  for (std::size_t i = 0; i < serial.rows.size(); ++i) {
    CHECK(serial.rows[i].seed == parallel.rows[i].seed);
    CHECK(serial.rows[i].residual == parallel.rows[i].residual);
  }
  REQUIRE(serial.summary.size() == 8);
  for (const auto& st : serial.summary) {
    CHECK(st.min <= st.mean);
    CHECK(st.mean <= st.max);
  }
  CHECK(serial.rows.front().seed == 1);
  CHECK(serial.rows.back().seed == 6);

  const std::vector<Probe> bad{{"wide", delta(100)}};
  CHECK_THROWS_AS(monte_carlo(params, many, 2, bad), SupportOverflowError);
  const std::vector<Probe> not_unit{{"x", delta(0).scaled(3.0)}};
  CHECK_THROWS_AS(monte_carlo(params, many, 2, not_unit), DomainError);
}
