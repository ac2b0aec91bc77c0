#include "cesaro/operator.hpp"

#include <cmath>

#include "cesaro/errors.hpp"

namespace cesaro {

double StateVector::norm_sq() const {
  KahanSum s;
  for (const Complex& z : amp) s.add(std::norm(z));
  return s.value();
}

double StateVector::norm() const { return std::sqrt(norm_sq()); }

StateVector zero_vector(const RootedTree& tree) {
  StateVector f;
  f.tree_uid = tree.uid;
  f.amp.assign(tree.vertex_count, Complex{0.0, 0.0});
  return f;
}

StateVector basis_vector(const RootedTree& tree, VertexId v) {
  if (v < 0 || v >= tree.vertex_count)
    throw MalformedSpec("basis vertex out of range");
  StateVector f = zero_vector(tree);
  f.amp[v] = Complex{1.0, 0.0};
  return f;
}

StateVector make_state(const RootedTree& tree, std::vector<Complex> amp) {
  if (static_cast<std::int64_t>(amp.size()) != tree.vertex_count)
    throw TreeMismatch("vector length does not match the vertex count");
  StateVector f;
  f.tree_uid = tree.uid;
  f.amp = std::move(amp);
  return f;
}

void apply_C_raw(const RootedTree& t, const Complex* in, Complex* out) {
  const std::int64_t n = t.vertex_count;
  // First pass: ancestor-chain prefix sums (parents precede children in id
  // order). Second pass: scale by 1/(depth+1).
  out[0] = in[0];
  for (std::int64_t v = 1; v < n; ++v) out[v] = in[v] + out[t.parent[v]];
  for (std::int64_t v = 0; v < n; ++v)
    out[v] /= static_cast<double>(t.depth[v] + 1);
}

void apply_C_adjoint_raw(const RootedTree& t, const Complex* in, Complex* out) {
  const std::int64_t n = t.vertex_count;
  // Subtree accumulation in reverse id order: children are processed before
  // their parent and occupy a contiguous id range.
  for (std::int64_t v = n - 1; v >= 0; --v) {
    Complex acc = in[v] / static_cast<double>(t.depth[v] + 1);
    for (std::int64_t c = t.child_offset[v]; c < t.child_offset[v + 1]; ++c)
      acc += out[c];
    out[v] = acc;
  }
}

namespace {

void check_bound(const CesaroContext& ctx, const StateVector& f) {
  if (f.tree_uid != ctx.tree->uid)
    throw TreeMismatch("vector is bound to a different tree");
  if (static_cast<std::int64_t>(f.amp.size()) != ctx.tree->vertex_count)
    throw TreeMismatch("vector length does not match the vertex count");
}

}  // namespace

StateVector apply_C(const CesaroContext& ctx, const StateVector& f) {
  check_bound(ctx, f);
  StateVector g;
  g.tree_uid = f.tree_uid;
  g.amp.resize(f.amp.size());
  apply_C_raw(*ctx.tree, f.amp.data(), g.amp.data());
  return g;
}

StateVector apply_C_adjoint(const CesaroContext& ctx, const StateVector& g) {
  check_bound(ctx, g);
  StateVector h;
  h.tree_uid = g.tree_uid;
  h.amp.resize(g.amp.size());
  apply_C_adjoint_raw(*ctx.tree, g.amp.data(), h.amp.data());
  return h;
}

DenseMatrix assemble_dense(const CesaroContext& ctx, std::int64_t dense_cap) {
  const RootedTree& t = *ctx.tree;
  if (t.vertex_count > dense_cap)
    throw TooLarge("dense assembly over " + std::to_string(t.vertex_count) +
                   " vertices exceeds the cap " + std::to_string(dense_cap));
  DenseMatrix m;
  m.n = t.vertex_count;
  m.a.assign(m.n * m.n, 0.0);
  for (std::int64_t v = 0; v < m.n; ++v) {
    double w = 1.0 / static_cast<double>(t.depth[v] + 1);
    VertexId u = v;
    while (u != kNoVertex) {
      m.at(v, u) = w;
      u = t.parent[u];
    }
  }
  return m;
}

std::vector<Complex> dense_matvec(const DenseMatrix& m,
                                  const std::vector<Complex>& x) {
  std::vector<Complex> y(m.n, Complex{0.0, 0.0});
  for (std::int64_t i = 0; i < m.n; ++i) {
    Complex acc{0.0, 0.0};
    for (std::int64_t j = 0; j < m.n; ++j) acc += m.at(i, j) * x[j];
    y[i] = acc;
  }
  return y;
}

std::vector<Complex> dense_matvec_adjoint(const DenseMatrix& m,
                                          const std::vector<Complex>& x) {
  std::vector<Complex> y(m.n, Complex{0.0, 0.0});
  for (std::int64_t i = 0; i < m.n; ++i)
    for (std::int64_t j = 0; j < m.n; ++j) y[j] += m.at(i, j) * x[i];
  return y;
}

DomainReport domain_membership(const RootedTree& tree, const TreeGenSpec& spec,
                               VertexId w, std::int64_t J) {
  if (J < 1) throw MalformedSpec("series length must be >= 1");
  GenerationCounts g = generation_counts(tree, spec, w);
  const std::int64_t dep = tree.depth[w];

  DomainReport r;
  r.vertex = w;
  r.J = J;
  KahanSum partial;
  std::int64_t stop = J;
  if (g.shape == GenerationCounts::Shape::finite_list)
    stop = std::min<std::int64_t>(J, static_cast<std::int64_t>(g.head.size()) - 1);
  for (std::int64_t j = 0; j <= stop; ++j) {
    double d = static_cast<double>(dep + j + 1);
    partial.add(static_cast<double>(g.count(j)) / (d * d));
  }
  r.partial_sum = partial.value();

  switch (g.shape) {
    case GenerationCounts::Shape::eventually_constant: {
      double c = static_cast<double>(g.eventual);
      Interval t = sq_reciprocal_tail(dep + J + 1);
      r.tail = Interval{c * t.lo, c * t.hi};
      r.membership = DomainReport::Membership::member;
      break;
    }
    case GenerationCounts::Shape::affine: {
      // Terms behave like 1/j: divergent. Declared divergent once the partial
      // sums pass the fixed bound; a short series stays inconclusive.
      r.tail = std::nullopt;
      r.membership = r.partial_sum > kDivergenceBound
                         ? DomainReport::Membership::non_member
                         : DomainReport::Membership::inconclusive;
      break;
    }
    case GenerationCounts::Shape::finite_list: {
      // Finite tree: the series is a finite sum; any terms past J are exact.
      KahanSum rest;
      for (std::int64_t j = stop + 1;
           j < static_cast<std::int64_t>(g.head.size()); ++j) {
        double d = static_cast<double>(dep + j + 1);
        rest.add(static_cast<double>(g.head[j]) / (d * d));
      }
      r.tail = Interval{rest.value(), rest.value()};
      r.membership = DomainReport::Membership::member;
      break;
    }
  }
  return r;
}

NormSqResult basis_image_norm_sq(const RootedTree& tree,
                                 const TreeGenSpec& spec, VertexId w,
                                 std::int64_t J) {
  DomainReport d = domain_membership(tree, spec, w, J);
  if (d.membership != DomainReport::Membership::member)
    throw NotInDomain("image series at vertex " + std::to_string(w) +
                      " does not converge");
  NormSqResult r;
  r.bracket = Interval{d.partial_sum + d.tail->lo, d.partial_sum + d.tail->hi};
  r.value = r.bracket.mid();
  return r;
}

}  // namespace cesaro
