#include "fraclap/localization.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <charconv>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>

#include "fraclap/errors.hpp"
#include "fraclap/kernel.hpp"

namespace fraclap {

namespace {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::int64_t ceil_steps(double t_end, double dt) {
  const double ratio = t_end / dt;
  const double rounded = std::round(ratio);
  if (std::abs(ratio - rounded) <= 1e-9 * std::max(1.0, ratio)) {
    return static_cast<std::int64_t>(rounded);
  }
  return static_cast<std::int64_t>(std::ceil(ratio));
}

}  // namespace

double disorder_site_value(double amplitude, std::uint64_t seed, std::int64_t n) noexcept {
  if (amplitude == 0.0) {
    return 0.0;
  }
  const std::uint64_t key = splitmix64(seed) ^ std::bit_cast<std::uint64_t>(n);
  const std::uint64_t bits = splitmix64(splitmix64(key));
  // 53 random bits in [0, 1).
  const double unit = static_cast<double>(bits >> 11) * 0x1.0p-53;
  return amplitude * (unit - 0.5);
}

double DisorderRealization::at(std::int64_t n) const noexcept {
  if (n < -window_radius || n > window_radius) {
    return 0.0;
  }
  return potential[static_cast<std::size_t>(n + window_radius)];
}

DisorderRealization sample_disorder(double amplitude, std::uint64_t seed,
                                    std::int64_t window_radius) {
  if (!(amplitude >= 0.0) || !std::isfinite(amplitude)) {
    throw DomainError("sample_disorder: amplitude must be finite and non-negative");
  }
  if (window_radius < 1) {
    throw DomainError("sample_disorder: window radius must be positive");
  }
  DisorderRealization d;
  d.amplitude = amplitude;
  d.seed = seed;
  d.window_radius = window_radius;
  d.potential.resize(static_cast<std::size_t>(2 * window_radius + 1));
  for (std::int64_t n = -window_radius; n <= window_radius; ++n) {
    d.potential[static_cast<std::size_t>(n + window_radius)] = disorder_site_value(amplitude, seed, n);
  }
  return d;
}

void HamiltonianConfig::validate() const {
  if (!(s > 0.0) || !std::isfinite(s)) {
    throw DomainError("hamiltonian: s must be positive and finite");
  }
  if (kernel_radius < 1) {
    throw DomainError("hamiltonian: kernel radius must be positive");
  }
  if (disorder.window_radius < 1 ||
      disorder.potential.size() != static_cast<std::size_t>(2 * disorder.window_radius + 1)) {
    throw DomainError("hamiltonian: disorder realization does not cover its window");
  }
  if (kernel_radius > disorder.window_radius) {
    throw DomainError("hamiltonian: kernel radius exceeds the window radius");
  }
}

std::shared_ptr<const SeriesStencil> Hamiltonian::make_stencil(double s,
                                                               std::int64_t window_radius) {
  return std::make_shared<const SeriesStencil>(s, 2 * window_radius);
}

Hamiltonian::Hamiltonian(HamiltonianConfig config)
    : Hamiltonian(config, make_stencil(config.s, config.disorder.window_radius)) {}

Hamiltonian::Hamiltonian(HamiltonianConfig config, std::shared_ptr<const SeriesStencil> stencil)
    : config_(std::move(config)), stencil_(std::move(stencil)) {
  config_.validate();
  const std::int64_t reach = 2 * window_radius();
  if (!stencil_ || stencil_->order() != config_.s || stencil_->max_offset() < reach) {
    throw DomainError("hamiltonian: stencil does not match the configuration");
  }
  const double far_tail = 0.5 * kernel_tail_bound(config_.s, reach);
  abs_suffix_.assign(static_cast<std::size_t>(reach + 2), far_tail);
  for (std::int64_t j = reach; j >= 0; --j) {
    abs_suffix_[static_cast<std::size_t>(j)] =
        abs_suffix_[static_cast<std::size_t>(j + 1)] + std::abs(stencil_->coefficient(j));
  }
  radius_tail_ = kernel_tail_bound(config_.s, config_.kernel_radius);
  const double kernel_l1 = 2.0 * abs_suffix_[1];
  norm_bound_ = stencil_->diagonal() + kernel_l1 + 0.5 * config_.disorder.amplitude;
}

HamiltonianApplication Hamiltonian::apply(const Sequence& u) const {
  const std::int64_t w = window_radius();
  if (u.empty()) {
    return {};
  }
  if (u.first() < -w || u.last() > w) {
    throw SupportOverflowError("hamiltonian: input support [" + std::to_string(u.first()) + ", " +
                               std::to_string(u.last()) + "] exceeds window [-" +
                               std::to_string(w) + ", " + std::to_string(w) + "]");
  }
  const std::int64_t r = config_.kernel_radius;
  const std::int64_t lo = std::max(u.first() - r, -w);
  const std::int64_t hi = std::min(u.last() + r, w);
  std::vector<double> out = stencil_->evaluate(u, lo, hi);
  for (std::int64_t n = std::max(lo, u.first()); n <= std::min(hi, u.last()); ++n) {
    out[static_cast<std::size_t>(n - lo)] += config_.disorder.at(n) * u(n);
  }

  const double sup = u.sup_norm();
  HamiltonianApplication result;
  result.result = Sequence(lo, std::move(out));
  result.truncation_bound = radius_tail_ * sup;
  double clipped = 0.0;
  if (u.first() - r < -w) {
    clipped = std::max(clipped, abs_suffix_[static_cast<std::size_t>(u.first() + w + 1)]);
  }
  if (u.last() + r > w) {
    clipped = std::max(clipped, abs_suffix_[static_cast<std::size_t>(w + 1 - u.last())]);
  }
  result.clipped_bound = clipped * sup;
  return result;
}

HamiltonianApplication apply_hamiltonian(const Sequence& u, const HamiltonianConfig& config) {
  return Hamiltonian(config).apply(u);
}

OrbitBasis orbit_basis(const Hamiltonian& hamiltonian, int depth, double residual_tol) {
  if (depth < 1) {
    throw DomainError("orbit_basis: depth must be at least 1");
  }
  if (!(residual_tol > 0.0)) {
    throw DomainError("orbit_basis: residual tolerance must be positive");
  }
  OrbitBasis basis;
  basis.residual_tol = residual_tol;
  basis.vectors.push_back(delta(0));
  basis.raw_norms.push_back(1.0);
  // Coordinates of H^k delta_0 in the current basis.
  std::vector<double> raw{1.0};
  // hessenberg[i][j] = <H b_i, b_j> for j <= i + 1.
  std::vector<std::vector<double>> hessenberg;

  for (int k = 1; k < depth; ++k) {
    Sequence w = hamiltonian.apply(basis.vectors.back()).result;
    const double applied_norm = norm(w);
    std::vector<double> column(basis.vectors.size() + 1, 0.0);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t j = 0; j < basis.vectors.size(); ++j) {
        const double c = inner(w, basis.vectors[j]);
        column[j] += c;
        w = axpy(-c, basis.vectors[j], w);
      }
    }
    const double beta = norm(w);
    if (!(beta >= residual_tol * applied_norm) || beta == 0.0) {
      break;
    }
    column.back() = beta;
    hessenberg.push_back(std::move(column));

    std::vector<double> next(basis.vectors.size() + 1, 0.0);
    for (std::size_t i = 0; i < raw.size(); ++i) {
      const auto& col = hessenberg[i];
      for (std::size_t j = 0; j < col.size(); ++j) {
        next[j] += raw[i] * col[j];
      }
    }
    raw = std::move(next);
    double raw_norm_sq = 0.0;
    for (double x : raw) {
      raw_norm_sq += x * x;
    }
    basis.raw_norms.push_back(std::sqrt(raw_norm_sq));
    basis.vectors.push_back(w.scaled(1.0 / beta));
  }
  return basis;
}

OrbitBasis orbit_basis(const HamiltonianConfig& config, int depth, double residual_tol) {
  return orbit_basis(Hamiltonian(config), depth, residual_tol);
}

namespace {

void require_unit(const Sequence& v) {
  if (std::abs(norm(v) - 1.0) > 1e-10) {
    throw DomainError("krylov_residual: probe must have unit norm");
  }
}

}  // namespace

double krylov_residual(const Sequence& v, const OrbitBasis& basis) {
  require_unit(v);
  Sequence r = v;
  for (const auto& b : basis.vectors) {
    r = axpy(-inner(r, b), b, r);
  }
  return norm(r);
}

std::vector<double> krylov_residual_profile(const Sequence& v, const OrbitBasis& basis,
                                            int depth) {
  require_unit(v);
  if (depth < 1) {
    throw DomainError("krylov_residual_profile: depth must be at least 1");
  }
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(depth));
  Sequence r = v;
  for (int d = 0; d < depth; ++d) {
    if (static_cast<std::size_t>(d) < basis.vectors.size()) {
      const auto& b = basis.vectors[static_cast<std::size_t>(d)];
      r = axpy(-inner(r, b), b, r);
      out.push_back(norm(r));
    } else {
      out.push_back(out.back());
    }
  }
  return out;
}

double stability_limit(const HamiltonianConfig& config) {
  return 0.5 / (kernel_sum(config.s) + 0.5 * config.disorder.amplitude);
}

EvolveResult evolve(const Sequence& u0, const Hamiltonian& hamiltonian, double t_end, double dt,
                    EvolutionSign sign) {
  if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
    throw DomainError("evolve: t_end must be finite and non-negative");
  }
  if (!(dt > 0.0) || !std::isfinite(dt)) {
    throw DomainError("evolve: dt must be positive");
  }
  const double limit = stability_limit(hamiltonian.config());
  if (dt > limit) {
    throw StabilityError("evolve: dt = " + std::to_string(dt) + " exceeds the stability bound " +
                         std::to_string(limit));
  }
  EvolveResult result;
  result.state = u0;
  if (t_end == 0.0) {
    return result;
  }
  const std::int64_t steps = std::max<std::int64_t>(1, ceil_steps(t_end, dt));
  const double h = t_end / static_cast<double>(steps);
  const double sgn = sign == EvolutionSign::plus ? 1.0 : -1.0;
  result.steps = steps;
  result.step = h;

  double dropped = 0.0;
  auto rhs = [&](const Sequence& u, double& stage_drop) {
    auto applied = hamiltonian.apply(u);
    stage_drop = std::max(stage_drop, applied.truncation_bound + applied.clipped_bound);
    return applied.result.scaled(sgn);
  };
  Sequence u = u0;
  for (std::int64_t step = 0; step < steps; ++step) {
    double stage_drop = 0.0;
    const Sequence k1 = rhs(u, stage_drop);
    const Sequence k2 = rhs(axpy(0.5 * h, k1, u), stage_drop);
    const Sequence k3 = rhs(axpy(0.5 * h, k2, u), stage_drop);
    const Sequence k4 = rhs(axpy(h, k3, u), stage_drop);
    Sequence next = axpy(h / 6.0, k1, u);
    next = axpy(h / 3.0, k2, next);
    next = axpy(h / 3.0, k3, next);
    u = axpy(h / 6.0, k4, next);
    dropped += h * stage_drop;
  }
  result.state = std::move(u);
  result.dropped_bound = dropped;
  return result;
}

EvolveResult evolve(const Sequence& u0, const HamiltonianConfig& config, double t_end, double dt,
                    EvolutionSign sign) {
  return evolve(u0, Hamiltonian(config), t_end, dt, sign);
}

Probe parse_probe(std::string_view spec) {
  const double r = 1.0 / std::numbers::sqrt2;
  if (spec == "odd") {
    return {"odd", Sequence(-1, {-r, 0.0, r})};
  }
  if (spec == "even") {
    return {"even", Sequence(-1, {r, 0.0, r})};
  }
  constexpr std::string_view prefix = "delta:";
  if (spec.starts_with(prefix)) {
    const auto digits = spec.substr(prefix.size());
    std::int64_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return {std::string(spec), delta(n)};
    }
  }
  throw ParseError("unknown probe '" + std::string(spec) + "' (expected odd, even or delta:N)");
}

EnsembleReport monte_carlo(const EnsembleTemplate& params, std::span<const std::uint64_t> seeds,
                           int depth, std::span<const Probe> probes, unsigned threads) {
  if (depth < 1) {
    throw DomainError("monte_carlo: depth must be at least 1");
  }
  for (const auto& p : probes) {
    require_unit(p.vector);
  }
  // Validates s and the radii before any worker starts.
  HamiltonianConfig probe_config{params.s, params.kernel_radius,
                                 sample_disorder(params.amplitude, 0, params.window_radius),
                                 Boundary::zero_extension};
  probe_config.validate();
  for (const auto& p : probes) {
    if (!p.vector.empty() &&
        (p.vector.first() < -params.window_radius || p.vector.last() > params.window_radius)) {
      throw SupportOverflowError("monte_carlo: probe '" + p.id + "' lies outside the window");
    }
  }

  const auto stencil = Hamiltonian::make_stencil(params.s, params.window_radius);
  // per_seed[i][p][d]
  std::vector<std::vector<std::vector<double>>> per_seed(seeds.size());
  std::vector<std::exception_ptr> failures(seeds.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < seeds.size(); i = next++) {
      try {
        HamiltonianConfig config{params.s, params.kernel_radius,
                                 sample_disorder(params.amplitude, seeds[i], params.window_radius),
                                 Boundary::zero_extension};
        const Hamiltonian h(std::move(config), stencil);
        const OrbitBasis basis = orbit_basis(h, depth, params.residual_tol);
        auto& slot = per_seed[i];
        for (const auto& p : probes) {
          slot.push_back(krylov_residual_profile(p.vector, basis, depth));
        }
      } catch (...) {
        failures[i] = std::current_exception();
      }
    }
  };
  const std::size_t workers =
      std::clamp<std::size_t>(threads == 0 ? 1 : threads, 1, std::max<std::size_t>(1, seeds.size()));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < workers; ++t) {
      pool.emplace_back(worker);
    }
  }
  for (const auto& f : failures) {
    if (f) {
      std::rethrow_exception(f);
    }
  }

  EnsembleReport report;
  report.params = params;
  report.depth = depth;
  report.seeds.assign(seeds.begin(), seeds.end());
  for (std::size_t i = 0; i < seeds.size(); ++i) {
    for (std::size_t p = 0; p < probes.size(); ++p) {
      for (int d = 0; d < depth; ++d) {
        report.rows.push_back({seeds[i], probes[p].id, d + 1,
                               per_seed[i][p][static_cast<std::size_t>(d)]});
      }
    }
  }
  if (!seeds.empty()) {
    for (std::size_t p = 0; p < probes.size(); ++p) {
      for (int d = 0; d < depth; ++d) {
        EnsembleStat stat{probes[p].id, d + 1, 0.0, INFINITY, -INFINITY};
        for (std::size_t i = 0; i < seeds.size(); ++i) {
          const double x = per_seed[i][p][static_cast<std::size_t>(d)];
          stat.mean += x;
          stat.min = std::min(stat.min, x);
          stat.max = std::max(stat.max, x);
        }
        stat.mean /= static_cast<double>(seeds.size());
        report.summary.push_back(std::move(stat));
      }
    }
  }
  return report;
}

}  // namespace fraclap
