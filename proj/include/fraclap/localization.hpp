#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "fraclap/fractional_laplacian.hpp"
#include "fraclap/lattice.hpp"

// Random fractional Schroedinger operators H = (-Delta)^s + eps on a finite
// window [-W, W] of Z, their Krylov orbits from delta_0 and seeded ensembles
// of span residuals.

namespace fraclap {

/// i.i.d. uniform potential eps_n in [-c/2, c/2] on [-W, W]. Site values are a
/// pure function of (seed, n, c), so growing W keeps the inner sites fixed.
struct DisorderRealization {
  double amplitude = 0.0;
  std::uint64_t seed = 0;
  std::int64_t window_radius = 0;
  std::vector<double> potential;  // index n + W

  double at(std::int64_t n) const noexcept;
};

/// Counter-based draw for site n.
double disorder_site_value(double amplitude, std::uint64_t seed, std::int64_t n) noexcept;

DisorderRealization sample_disorder(double amplitude, std::uint64_t seed, std::int64_t window_radius);

enum class Boundary { zero_extension };

struct HamiltonianConfig {
  double s = 0.5;
  std::int64_t kernel_radius = 64;
  DisorderRealization disorder;
  Boundary boundary = Boundary::zero_extension;

  void validate() const;
};

struct HamiltonianApplication {
  Sequence result;
  /// Bound on dropped values outside supp(u) dilated by the kernel radius.
  double truncation_bound = 0.0;
  /// Bound on dropped values beyond the window edge.
  double clipped_bound = 0.0;
};

class Hamiltonian {
 public:
  explicit Hamiltonian(HamiltonianConfig config);
  /// Reuses a kernel stencil covering offsets up to 2W (see make_stencil).
  Hamiltonian(HamiltonianConfig config, std::shared_ptr<const SeriesStencil> stencil);

  static std::shared_ptr<const SeriesStencil> make_stencil(double s, std::int64_t window_radius);

  const HamiltonianConfig& config() const noexcept { return config_; }
  std::int64_t window_radius() const noexcept { return config_.disorder.window_radius; }

  /// A_s + sum_k |K_s(k)| + c/2, an upper bound on the operator norm.
  double norm_bound() const noexcept { return norm_bound_; }

  /// (-Delta)^s u + eps u, restricted to [-W, W]. SupportOverflowError if u
  /// is not supported inside the window.
  HamiltonianApplication apply(const Sequence& u) const;

 private:
  HamiltonianConfig config_;
  std::shared_ptr<const SeriesStencil> stencil_;
  std::vector<double> abs_suffix_;  // sum_{j >= d} |K_s(j)| over the stencil, plus tail
  double radius_tail_ = 0.0;
  double norm_bound_ = 0.0;
};

HamiltonianApplication apply_hamiltonian(const Sequence& u, const HamiltonianConfig& config);

/// Orthonormal basis of span{H^k delta_0 : k < depth}.
struct OrbitBasis {
  std::vector<Sequence> vectors;
  std::vector<double> raw_norms;  // |H^k delta_0|
  double residual_tol = 1e-12;
};

/// Orthonormalizes the orbit with modified Gram-Schmidt plus one
/// reorthogonalization pass. Each new direction is generated as H applied to
/// the newest basis vector (same span as the raw powers); raw norms are
/// recovered from the Hessenberg coordinates. Stops early once the new
/// direction is below residual_tol relative to |H b_k|.
OrbitBasis orbit_basis(const Hamiltonian& hamiltonian, int depth, double residual_tol = 1e-12);
OrbitBasis orbit_basis(const HamiltonianConfig& config, int depth, double residual_tol = 1e-12);

/// Distance from unit vector v to the span of the basis.
double krylov_residual(const Sequence& v, const OrbitBasis& basis);

/// Distances to the spans of the first d basis vectors, d = 1..depth (the
/// last value repeats once the basis is exhausted).
std::vector<double> krylov_residual_profile(const Sequence& v, const OrbitBasis& basis, int depth);

enum class EvolutionSign { plus, minus };

struct EvolveResult {
  Sequence state;
  std::int64_t steps = 0;
  double step = 0.0;
  /// Accumulated bound on mass dropped at the window edge and kernel radius.
  double dropped_bound = 0.0;
};

/// dt <= 0.5 / (A_s + c/2).
double stability_limit(const HamiltonianConfig& config);

/// Classical RK4 for u' = +H u (sign plus) or u' = -H u (sign minus) with
/// ceil(t_end / dt) uniform steps. StabilityError above stability_limit.
EvolveResult evolve(const Sequence& u0, const Hamiltonian& hamiltonian, double t_end, double dt,
                    EvolutionSign sign = EvolutionSign::plus);
EvolveResult evolve(const Sequence& u0, const HamiltonianConfig& config, double t_end, double dt,
                    EvolutionSign sign = EvolutionSign::plus);

struct Probe {
  std::string id;
  Sequence vector;
};

/// "odd" = (delta_1 - delta_-1)/sqrt 2, "even" = (delta_1 + delta_-1)/sqrt 2,
/// "delta:N" = delta_N.
Probe parse_probe(std::string_view spec);

struct EnsembleTemplate {
  double s = 0.5;
  double amplitude = 1.0;
  std::int64_t window_radius = 256;
  std::int64_t kernel_radius = 64;
  double residual_tol = 1e-12;
};

struct EnsembleRow {
  std::uint64_t seed = 0;
  std::string probe_id;
  int depth = 0;
  double residual = 0.0;
};

struct EnsembleStat {
  std::string probe_id;
  int depth = 0;
  double mean = 0.0;
  double min = 0.0;
  double max = 0.0;
};

struct EnsembleReport {
  EnsembleTemplate params;
  int depth = 0;
  std::vector<std::uint64_t> seeds;
  std::vector<EnsembleRow> rows;      // seed order, then probe order, then depth
  std::vector<EnsembleStat> summary;  // probe order, then depth
};

/// One orbit per seed, residual of every probe at depths 1..depth. Seeds are
/// processed on up to `threads` workers; output order and values do not
/// depend on the thread count.
EnsembleReport monte_carlo(const EnsembleTemplate& params, std::span<const std::uint64_t> seeds,
                           int depth, std::span<const Probe> probes, unsigned threads = 1);

}  // namespace fraclap
