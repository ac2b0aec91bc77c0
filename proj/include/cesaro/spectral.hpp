#pragma once

// Spectral analytics for the truncated averaging operator: section norms by
// matrix-free power iteration, Rayleigh lower certificates, product-formula
// adjoint eigenvectors with windowed residuals, the integer forward solver
// along child chains, hyponormality gaps with closed forms, the
// nonnegative-sequence averaging inequality, and per-lambda spectrum
// indicators.

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "cesaro/operator.hpp"
#include "cesaro/series.hpp"
#include "cesaro/tree.hpp"

namespace cesaro {

inline constexpr double kDefaultTolerance = 1e-10;
inline constexpr std::int64_t kDefaultMaxIters = 100000;
inline constexpr std::int64_t kDefaultSeriesCap = 1000000;

struct Certificate {
  std::string label;
  double value = 0.0;
};

struct NormReport {
  std::int64_t N = 0;
  double section_norm = 0.0;
  std::vector<Certificate> lower_certificates;
  // 2*sqrt(width) when the family has a finite width; absent otherwise.
  std::optional<double> upper_bound;
  std::int64_t iterations = 0;
  double tolerance = 0.0;
  // Display-only values attached per branching vertex
  // (card(Chi(w)) * sqrt(tail of the square-reciprocal series)); they are
  // *not* certified bounds and are excluded from the envelope invariant.
  std::vector<Certificate> uncertified_branching_values;
};

// Largest singular value of the N-section via power iteration on C*C,
// matrix-free, deterministic all-ones start, relative-change stopping rule.
NormReport section_norm(const CesaroContext& ctx, const TreeGenSpec& spec,
                        double tol = kDefaultTolerance,
                        std::int64_t max_iters = kDefaultMaxIters);

// Rayleigh quotients ||C f|| / ||f|| for a structured family of vectors:
// basis vectors at branching vertices, equal-weight sums over sibling sets,
// and truncated product-formula eigenvectors.
std::vector<Certificate> lower_bound_certificates(const CesaroContext& ctx,
                                                  const TreeGenSpec& spec);
std::vector<Certificate> uncertified_branching_values(
    const CesaroContext& ctx, const TreeGenSpec& spec);

struct EigenCertificate {
  Complex lambda;
  std::vector<VertexId> path_vertices;
  std::vector<Complex> coefficients;  // x(n) along the chain; x(0) = 1
  std::int64_t window = 0;            // trailing chain coordinates excluded
  double residual = 0.0;              // ||(C* - lambda) x|| / ||x||, windowed
  double residual_full = 0.0;         // same without the window
  double excluded_tail_mass = 0.0;    // relative mass of the excluded window
  double norm_sq_partial = 0.0;
};

// Product-formula vector x(n) = prod_{j=1..n} (1 - 1/(j*lambda)) placed along
// the path_index-th maximal chain; requires |lambda - 1| < 1.
EigenCertificate adjoint_path_eigenvector(const CesaroContext& ctx,
                                          Complex lambda,
                                          std::int64_t path_index = 0);

// Forward solve of (C - lambda) f = 0 along the first child chain from the
// seed with f(seed) = 1 and lambda = 1/(dep(seed)+1). Coefficients are the
// binomials binomial(dep+n, n), held exactly in 64-bit integers with overflow
// detection; the squared partial sums document the blow-up.
struct ForwardSolveRow {
  std::int64_t n = 0;
  VertexId vertex = 0;
  std::uint64_t coefficient = 0;
  bool matches_binomial = false;  // cross-checked against an independent
                                  // product-form evaluation
  double partial_sum_sq = 0.0;
};

struct ForwardSolveResult {
  VertexId seed = 0;
  double lambda = 0.0;
  // Genuine-leaf seed (or a genuine leaf met along the chain): the chain
  // cannot continue and e_leaf itself is an exact eigenvector.
  bool leaf_encountered = false;
  VertexId leaf_vertex = kNoVertex;
  double leaf_lambda = 0.0;  // 1/(dep(leaf_vertex)+1) when a leaf was met
  std::vector<ForwardSolveRow> rows;
  bool overflowed = false;  // 64-bit limit stopped the table early
  bool binomials_match = false;
  std::optional<std::int64_t> sum_crossing_index;  // first n with
                                                   // partial_sum_sq > 1e6
  std::string verdict;  // "not-square-summable" | "exact-eigenpair"
};

ForwardSolveResult point_spectrum_forward_solve(const CesaroContext& ctx,
                                                VertexId seed,
                                                std::int64_t max_rows = 60);

struct HypoVectorChoice {
  enum class Kind { canonical, basis };
  Kind kind = Kind::canonical;
  std::int64_t basis_n = 0;  // vertex id for Kind::basis
};

struct HypoReport {
  std::string test_vector_label;
  Interval gap;  // ||C f||^2 - ||C* f||^2, series partial + tail bracket
  std::optional<double> closed_form;
  std::int64_t k_T = 0;
  double section_gap = 0.0;  // same quantity measured on the truncation
};

// Canonical choice: f = e_u + e_v for the two first children of the deepest
// branching vertex (whose subtrees must be pure chains in the truncation);
// the gap then depends only on the branching index. Basis choice: f = e_w.
HypoReport hyponormality_gap(const RootedTree& tree, const TreeGenSpec& spec,
                             const HypoVectorChoice& choice,
                             std::int64_t J = kDefaultSeriesCap);

struct HardyResult {
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
};

// lhs = sum_n ((1/(n+1)) sum_{j<=n} a_j)^2 against rhs = 4 sum_n a_n^2;
// throws NegativeEntry on negative input.
HardyResult hardy_oracle(const std::vector<double>& a);

// Per-lambda spectrum indicators: inside the unit disc centred at 1, the
// eigenvector-certificate residual; outside it (beyond a safety margin), the
// smallest singular value of (section - lambda) by inverse power iteration
// with O(|V|) triangular solves. Points in the margin ring are reported
// unclassified.
struct SpectrumPoint {
  Complex lambda;
  enum class Kind { inside_disc, outside_disc, boundary_ring };
  Kind kind = Kind::boundary_ring;
  std::optional<double> value;  // residual (inside) or sigma_min (outside)
  std::int64_t iterations = 0;
};

inline constexpr double kDiscMargin = 0.05;

std::vector<SpectrumPoint> spectrum_certificates(
    const CesaroContext& ctx, const std::vector<Complex>& lambdas,
    double tol = kDefaultTolerance, std::int64_t max_iters = kDefaultMaxIters);

// Triangular solves for (C - lambda) x = b and its adjoint on the truncation,
// O(|V|) each; exposed for tests.
std::vector<Complex> shifted_solve(const RootedTree& tree, Complex lambda,
                                   const std::vector<Complex>& b);
std::vector<Complex> shifted_solve_adjoint(const RootedTree& tree,
                                           Complex lambda,
                                           const std::vector<Complex>& b);

}  // namespace cesaro
