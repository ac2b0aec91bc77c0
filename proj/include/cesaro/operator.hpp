#pragma once

// The averaging operator C and its adjoint on a truncated tree: matrix-free
// linear-time kernels, a capped dense assembly used as an oracle, and the
// image-norm / domain series for basis vectors.
//
// (C f)(v) averages f over the ancestor chain of v (root..v inclusive), so in
// BFS id order C is lower triangular with diagonal 1/(depth+1). The adjoint
// accumulates g(v)/(depth(v)+1) over the descendants-or-self of each vertex.

#include <complex>
#include <cstdint>
#include <vector>

#include "cesaro/series.hpp"
#include "cesaro/tree.hpp"

namespace cesaro {

using Complex = std::complex<double>;

struct StateVector {
  std::uint64_t tree_uid = 0;
  std::vector<Complex> amp;

  double norm_sq() const;
  double norm() const;
};

StateVector zero_vector(const RootedTree& tree);
StateVector basis_vector(const RootedTree& tree, VertexId v);
StateVector make_state(const RootedTree& tree, std::vector<Complex> amp);

// Cached traversal orders. With BFS ids the parent-before-child order is the
// id order itself and the reverse order is its mirror, so the context only
// needs the tree; it exists to pin vectors to trees and to keep call sites
// uniform.
struct CesaroContext {
  const RootedTree* tree;
  explicit CesaroContext(const RootedTree& t) : tree(&t) {}
};

// Low-level kernels over raw arrays (no binding checks): out may not alias in.
void apply_C_raw(const RootedTree& tree, const Complex* in, Complex* out);
void apply_C_adjoint_raw(const RootedTree& tree, const Complex* in,
                         Complex* out);

StateVector apply_C(const CesaroContext& ctx, const StateVector& f);
StateVector apply_C_adjoint(const CesaroContext& ctx, const StateVector& g);

inline constexpr std::int64_t kDefaultDenseCap = 4096;

// Row-major dense section; entries are real (1/(depth+1) on ancestor
// positions, 0 elsewhere).
struct DenseMatrix {
  std::int64_t n = 0;
  std::vector<double> a;
  double at(std::int64_t i, std::int64_t j) const { return a[i * n + j]; }
  double& at(std::int64_t i, std::int64_t j) { return a[i * n + j]; }
};

DenseMatrix assemble_dense(const CesaroContext& ctx,
                           std::int64_t dense_cap = kDefaultDenseCap);

std::vector<Complex> dense_matvec(const DenseMatrix& m,
                                  const std::vector<Complex>& x);
std::vector<Complex> dense_matvec_adjoint(const DenseMatrix& m,
                                          const std::vector<Complex>& x);

// Convergence test for the basis-image series at w:
//   sum_j card(Chi^<j>(w)) / (dep(w)+j+1)^2.
struct DomainReport {
  VertexId vertex = 0;
  std::int64_t J = 0;
  double partial_sum = 0.0;
  // Bracket on the dropped tail when the generator pins the level growth;
  // absent ("unknown") otherwise.
  std::optional<Interval> tail;
  enum class Membership { member, non_member, inconclusive };
  Membership membership = Membership::inconclusive;
};

// Partial sums that pass this bound are declared divergent when the
// generator's level growth is unbounded (widening trunk).
inline constexpr double kDivergenceBound = 10.0;

DomainReport domain_membership(const RootedTree& tree, const TreeGenSpec& spec,
                               VertexId w, std::int64_t J);

// ||C e_w||^2 with the tail bracket applied; throws NotInDomain when the
// series diverges.
struct NormSqResult {
  double value = 0.0;  // bracket midpoint
  Interval bracket;
};
NormSqResult basis_image_norm_sq(const RootedTree& tree,
                                 const TreeGenSpec& spec, VertexId w,
                                 std::int64_t J);

}  // namespace cesaro
