#include "cesaro/spectral.hpp"

#include <algorithm>
#include <cmath>

#include "cesaro/errors.hpp"

namespace cesaro {

namespace {

double real_dot(const std::vector<Complex>& a, const std::vector<Complex>& b) {
  KahanSum re;
  for (std::size_t i = 0; i < a.size(); ++i)
    re.add((std::conj(a[i]) * b[i]).real());
  return re.value();
}

double vec_norm(const std::vector<Complex>& a) {
  KahanSum s;
  for (const Complex& z : a) s.add(std::norm(z));
  return std::sqrt(s.value());
}

void normalize(std::vector<Complex>& a) {
  double n = vec_norm(a);
  for (Complex& z : a) z /= n;
}

// Rayleigh quotient ||C f|| / ||f|| on the section.
double rayleigh_quotient(const RootedTree& t, const std::vector<Complex>& f) {
  std::vector<Complex> g(f.size());
  apply_C_raw(t, f.data(), g.data());
  return vec_norm(g) / vec_norm(f);
}

// Product-formula coefficients x(0..L-1) for the adjoint eigenvector.
std::vector<Complex> product_coefficients(Complex lambda, std::int64_t L) {
  std::vector<Complex> x(L);
  x[0] = Complex{1.0, 0.0};
  for (std::int64_t m = 1; m < L; ++m)
    x[m] = x[m - 1] * (Complex{1.0, 0.0} - 1.0 / (static_cast<double>(m) * lambda));
  return x;
}

// Branching vertices in id order, capped; earliest ids carry the extreme
// values for every family we generate.
std::vector<VertexId> capped_branching(const RootedTree& t, std::int64_t cap) {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < t.vertex_count && static_cast<std::int64_t>(out.size()) < cap; ++v)
    if (t.child_count(v) >= 2) out.push_back(v);
  return out;
}

constexpr std::int64_t kCertificateBranchCap = 4;
constexpr std::int64_t kDisplayBranchCap = 8;
const double kChainLambdas[] = {1.2, 1.5, 1.8, 1.9};

std::uint64_t binomial_checked(std::int64_t top, std::int64_t bot,
                               bool& overflow) {
  // C(top, bot) by the multiplicative formula; every division is exact.
  std::uint64_t r = 1;
  for (std::int64_t i = 1; i <= bot; ++i) {
    std::uint64_t t;
    if (__builtin_mul_overflow(r, static_cast<std::uint64_t>(top - bot + i),
                               &t)) {
      overflow = true;
      return 0;
    }
    r = t / static_cast<std::uint64_t>(i);
  }
  return r;
}

}  // namespace

NormReport section_norm(const CesaroContext& ctx, const TreeGenSpec& spec,
                        double tol, std::int64_t max_iters) {
  const RootedTree& t = *ctx.tree;
  const std::int64_t n = t.vertex_count;
  std::vector<Complex> x(n, Complex{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
  std::vector<Complex> y(n), z(n);

  NormReport rep;
  rep.N = t.truncation_depth;
  rep.tolerance = tol;

  double prev = 0.0;
  double sigma = 0.0;
  bool converged = false;
  for (std::int64_t it = 1; it <= max_iters; ++it) {
    apply_C_raw(t, x.data(), y.data());
    apply_C_adjoint_raw(t, y.data(), z.data());
    sigma = std::sqrt(std::max(real_dot(x, z), 0.0));
    x = z;
    normalize(x);
    rep.iterations = it;
    if (std::abs(sigma - prev) <= tol * std::max(sigma, 1.0)) {
      converged = true;
      break;
    }
    prev = sigma;
  }
  if (!converged)
    throw NoConvergence("power iteration did not meet tolerance", max_iters);

  rep.section_norm = sigma;
  TreeMetrics m = compute_metrics(t, spec);
  if (m.width)
    rep.upper_bound = 2.0 * std::sqrt(static_cast<double>(*m.width));
  rep.lower_certificates = lower_bound_certificates(ctx, spec);
  rep.uncertified_branching_values = uncertified_branching_values(ctx, spec);
  return rep;
}

std::vector<Certificate> lower_bound_certificates(const CesaroContext& ctx,
                                                  const TreeGenSpec& spec) {
  (void)spec;
  const RootedTree& t = *ctx.tree;
  std::vector<Certificate> certs;

  {
    std::vector<Complex> f(t.vertex_count, Complex{0.0, 0.0});
    f[t.root] = 1.0;
    certs.push_back({"e_root", rayleigh_quotient(t, f)});
  }

  for (VertexId w : capped_branching(t, kCertificateBranchCap)) {
    if (w != t.root) {
      std::vector<Complex> f(t.vertex_count, Complex{0.0, 0.0});
      f[w] = 1.0;
      certs.push_back({"e_" + std::to_string(w), rayleigh_quotient(t, f)});
    }
    // Equal weights over the children of a branching vertex.
    std::vector<Complex> s(t.vertex_count, Complex{0.0, 0.0});
    for (std::int64_t c = t.child_offset[w]; c < t.child_offset[w + 1]; ++c)
      s[c] = 1.0;
    certs.push_back(
        {"children_of_" + std::to_string(w), rayleigh_quotient(t, s)});
  }

  // Truncated product-formula vectors along the first maximal chain.
  auto paths = enumerate_paths(t, 1);
  if (!paths.empty()) {
    const auto& chain = paths[0];
    for (double lam : kChainLambdas) {
      auto x = product_coefficients(Complex{lam, 0.0},
                                    static_cast<std::int64_t>(chain.size()));
      std::vector<Complex> f(t.vertex_count, Complex{0.0, 0.0});
      for (std::size_t i = 0; i < chain.size(); ++i) f[chain[i]] = x[i];
      char label[48];
      std::snprintf(label, sizeof label, "chain_lambda_%.2f", lam);
      certs.push_back({label, rayleigh_quotient(t, f)});
    }
  }
  return certs;
}

std::vector<Certificate> uncertified_branching_values(
    const CesaroContext& ctx, const TreeGenSpec& spec) {
  (void)spec;
  const RootedTree& t = *ctx.tree;
  std::vector<Certificate> out;
  for (VertexId w : capped_branching(t, kDisplayBranchCap)) {
    // card(Chi(w)) * sqrt(sum_{j > dep(w)} 1/(j+1)^2); displayed for
    // comparison only, never used as a bound.
    double tail = kBasel - harmonic_squares(t.depth[w] + 1);
    out.push_back({"branching_vertex_" + std::to_string(w),
                   static_cast<double>(t.child_count(w)) * std::sqrt(tail)});
  }
  return out;
}

EigenCertificate adjoint_path_eigenvector(const CesaroContext& ctx,
                                          Complex lambda,
                                          std::int64_t path_index) {
  if (std::abs(lambda - Complex{1.0, 0.0}) >= 1.0)
    throw OutsideDisc("lambda must satisfy |lambda - 1| < 1");
  const RootedTree& t = *ctx.tree;
  auto paths = enumerate_paths(t, path_index + 1);
  if (path_index >= static_cast<std::int64_t>(paths.size()))
    throw PathIndexOutOfRange("only " + std::to_string(paths.size()) +
                              " maximal chains exist");
  EigenCertificate cert;
  cert.lambda = lambda;
  cert.path_vertices = paths[path_index];
  const std::int64_t L = static_cast<std::int64_t>(cert.path_vertices.size());
  cert.coefficients = product_coefficients(lambda, L);

  std::vector<Complex> x(t.vertex_count, Complex{0.0, 0.0});
  for (std::int64_t i = 0; i < L; ++i)
    x[cert.path_vertices[i]] = cert.coefficients[i];
  std::vector<Complex> y(t.vertex_count);
  apply_C_adjoint_raw(t, x.data(), y.data());

  std::int64_t W = std::max<std::int64_t>(3, t.truncation_depth / 10);
  W = std::min(W, L - 1);  // always keep at least the leading coordinate
  if (W < 0) W = 0;
  cert.window = W;
  std::vector<std::uint8_t> excluded(t.vertex_count, 0);
  for (std::int64_t i = L - W; i < L; ++i) excluded[cert.path_vertices[i]] = 1;

  KahanSum kept, cut;
  for (std::int64_t v = 0; v < t.vertex_count; ++v) {
    double r2 = std::norm(y[v] - lambda * x[v]);
    if (excluded[v])
      cut.add(r2);
    else
      kept.add(r2);
  }
  KahanSum nx;
  for (std::int64_t i = 0; i < L; ++i) nx.add(std::norm(cert.coefficients[i]));
  cert.norm_sq_partial = nx.value();
  double norm_x = std::sqrt(cert.norm_sq_partial);
  cert.residual = std::sqrt(kept.value()) / norm_x;
  cert.residual_full = std::sqrt(kept.value() + cut.value()) / norm_x;
  cert.excluded_tail_mass = std::sqrt(cut.value()) / norm_x;
  return cert;
}

ForwardSolveResult point_spectrum_forward_solve(const CesaroContext& ctx,
                                                VertexId seed,
                                                std::int64_t max_rows) {
  const RootedTree& t = *ctx.tree;
  if (seed < 0 || seed >= t.vertex_count)
    throw MalformedSpec("seed vertex out of range");
  const std::int64_t d = t.depth[seed];

  ForwardSolveResult res;
  res.seed = seed;
  res.lambda = 1.0 / static_cast<double>(d + 1);

  if (t.is_genuine_leaf(seed)) {
    // No chain to follow: e_seed itself is an exact eigenvector at 1/(d+1).
    res.leaf_encountered = true;
    res.leaf_vertex = seed;
    res.leaf_lambda = res.lambda;
    res.verdict = "exact-eigenpair";
    res.rows.push_back({0, seed, 1, true, 1.0});
    res.binomials_match = true;
    return res;
  }
  if (t.is_childless(seed))
    throw TruncationTooShallow(
        "the child chain from the seed is cut by the truncation");

  // Exact integer recursion along the first child chain. With
  // S_{n-1} = sum_{j<n} f_j the averaging equation forces
  // f_n = (d+1) * S_{n-1} / n, and the division is always exact
  // (f_n is the binomial coefficient C(d+n, n)).
  res.rows.push_back({0, seed, 1, true, 1.0});
  res.binomials_match = true;
  KahanSum sum_sq;
  sum_sq.add(1.0);
  std::uint64_t S = 1;
  VertexId v = seed;
  for (std::int64_t n = 1; n <= max_rows; ++n) {
    if (t.is_childless(v)) {
      if (t.frontier[v]) break;  // the infinite chain continues past N
      res.leaf_encountered = true;
      res.leaf_vertex = v;
      res.leaf_lambda = 1.0 / static_cast<double>(t.depth[v] + 1);
      break;
    }
    v = t.first_child(v);
    std::uint64_t scaled;
    if (__builtin_mul_overflow(S, static_cast<std::uint64_t>(d + 1),
                               &scaled)) {
      res.overflowed = true;
      break;
    }
    std::uint64_t f = scaled / static_cast<std::uint64_t>(n);
    if (f * static_cast<std::uint64_t>(n) != scaled) {
      // cannot happen mathematically; keep the table honest if it ever did
      res.binomials_match = false;
      break;
    }
    std::uint64_t S_next;
    if (__builtin_add_overflow(S, f, &S_next)) {
      res.overflowed = true;
      break;
    }
    S = S_next;

    bool ovf = false;
    std::uint64_t check = binomial_checked(d + n, std::min<std::int64_t>(n, d),
                                           ovf);
    bool match = !ovf && check == f;
    if (!match) res.binomials_match = false;

    double df = static_cast<double>(f);
    sum_sq.add(df * df);
    if (!res.sum_crossing_index && sum_sq.value() > 1e6)
      res.sum_crossing_index = n;
    res.rows.push_back({n, v, f, match, sum_sq.value()});
  }

  if (res.leaf_encountered) {
    res.verdict = "exact-eigenpair";
  } else {
    res.verdict = "not-square-summable";
  }
  return res;
}

HypoReport hyponormality_gap(const RootedTree& tree, const TreeGenSpec& spec,
                             const HypoVectorChoice& choice, std::int64_t J) {
  CesaroContext ctx(tree);
  HypoReport rep;

  if (choice.kind == HypoVectorChoice::Kind::basis) {
    VertexId w = choice.basis_n;
    if (w < 0 || w >= tree.vertex_count)
      throw MalformedSpec("basis vertex out of range");
    GenerationCounts g = generation_counts(tree, spec, w);
    if (g.shape == GenerationCounts::Shape::affine)
      throw NotInDomain("image series at the chosen vertex diverges");
    const std::int64_t dep = tree.depth[w];
    const double pull = 1.0 / static_cast<double>(dep + 1);  // ||C* e_w||^2

    DomainReport dr = domain_membership(tree, spec, w, J);
    rep.gap = Interval{dr.partial_sum + dr.tail->lo - pull,
                       dr.partial_sum + dr.tail->hi - pull};
    if (g.shape == GenerationCounts::Shape::eventually_constant &&
        g.head.size() == 1) {
      double c = static_cast<double>(g.eventual);
      rep.closed_form = pull * pull +
                        c * (kBasel - harmonic_squares(dep + 1)) - pull;
    }
    rep.test_vector_label = "e_" + std::to_string(w);
    TreeMetrics m = compute_metrics(tree, spec);
    rep.k_T = m.branching_index.value_or(-1);

    StateVector f = basis_vector(tree, w);
    StateVector cf = apply_C(ctx, f);
    StateVector af = apply_C_adjoint(ctx, f);
    rep.section_gap = cf.norm_sq() - af.norm_sq();
    return rep;
  }

  // Canonical pair below the deepest branching vertex.
  TreeMetrics m = compute_metrics(tree, spec);
  if (!m.branching_index)
    throw InfiniteBranchingIndex(
        "canonical gap needs a family whose branching stops");
  if (m.branching_vertices.empty())
    throw NoBranchingVertex("tree has no branching vertex");
  VertexId w = m.branching_vertices[0];
  for (VertexId v : m.branching_vertices)
    if (tree.depth[v] > tree.depth[w]) w = v;
  const std::int64_t k = tree.depth[w] + 1;  // branching index

  VertexId c1 = tree.first_child(w);
  VertexId c2 = c1 + 1;  // children occupy a contiguous id range
  for (VertexId c : {c1, c2}) {
    VertexId u = c;
    while (!tree.is_childless(u)) {
      if (tree.child_count(u) != 1)
        throw MalformedSpec(
            "canonical vector needs pure chains below the branching vertex");
      u = tree.first_child(u);
    }
  }

  double partial = sq_reciprocal_partial(k + 1, J);
  Interval tail = sq_reciprocal_tail(k + J + 1);
  const double dk = static_cast<double>(k);
  const double drop = 4.0 * dk / ((dk + 1.0) * (dk + 1.0));
  rep.gap = Interval{2.0 * (partial + tail.lo) - drop,
                     2.0 * (partial + tail.hi) - drop};
  rep.closed_form = 2.0 * (kBasel - harmonic_squares(k + 1)) - drop;
  rep.test_vector_label = "canonical_pair_depth_" + std::to_string(k);
  rep.k_T = k;

  StateVector f = zero_vector(tree);
  f.amp[c1] = 1.0;
  f.amp[c2] = 1.0;
  StateVector cf = apply_C(ctx, f);
  StateVector af = apply_C_adjoint(ctx, f);
  rep.section_gap = cf.norm_sq() - af.norm_sq();
  return rep;
}

HardyResult hardy_oracle(const std::vector<double>& a) {
  for (double x : a)
    if (x < 0.0) throw NegativeEntry("sequence entries must be nonnegative");
  HardyResult r;
  KahanSum lhs, rhs, prefix;
  for (std::size_t n = 0; n < a.size(); ++n) {
    prefix.add(a[n]);
    double avg = prefix.value() / static_cast<double>(n + 1);
    lhs.add(avg * avg);
    rhs.add(a[n] * a[n]);
  }
  r.lhs = lhs.value();
  r.rhs = 4.0 * rhs.value();
  r.holds = r.lhs <= r.rhs + 1e-12;
  return r;
}

std::vector<Complex> shifted_solve(const RootedTree& t, Complex lambda,
                                   const std::vector<Complex>& b) {
  const std::int64_t n = t.vertex_count;
  std::vector<Complex> x(n), S(n);
  for (std::int64_t v = 0; v < n; ++v) {
    double inv = 1.0 / static_cast<double>(t.depth[v] + 1);
    Complex above = (v == t.root) ? Complex{0.0, 0.0} : S[t.parent[v]];
    Complex div = Complex{inv, 0.0} - lambda;
    if (std::abs(div) == 0.0)
      throw MalformedSpec("shift coincides with a diagonal entry");
    x[v] = (b[v] - above * inv) / div;
    S[v] = above + x[v];
  }
  return x;
}

std::vector<Complex> shifted_solve_adjoint(const RootedTree& t, Complex lambda,
                                           const std::vector<Complex>& b) {
  const std::int64_t n = t.vertex_count;
  const Complex lbar = std::conj(lambda);
  std::vector<Complex> y(n), T(n);
  for (std::int64_t v = n - 1; v >= 0; --v) {
    double inv = 1.0 / static_cast<double>(t.depth[v] + 1);
    Complex below{0.0, 0.0};
    for (std::int64_t c = t.child_offset[v]; c < t.child_offset[v + 1]; ++c)
      below += T[c];
    Complex div = Complex{inv, 0.0} - lbar;
    if (std::abs(div) == 0.0)
      throw MalformedSpec("shift coincides with a diagonal entry");
    y[v] = (b[v] - below) / div;
    T[v] = y[v] * inv + below;
  }
  return y;
}

namespace {

double smallest_singular_value(const RootedTree& t, Complex lambda, double tol,
                               std::int64_t max_iters, std::int64_t& iters) {
  const std::int64_t n = t.vertex_count;
  std::vector<Complex> x(n, Complex{1.0 / std::sqrt(static_cast<double>(n)), 0.0});
  double prev = -1.0;
  double sig = 0.0;
  for (std::int64_t it = 1; it <= max_iters; ++it) {
    std::vector<Complex> y = shifted_solve_adjoint(t, lambda, x);
    std::vector<Complex> z = shifted_solve(t, lambda, y);
    double mu = std::max(real_dot(x, z), 0.0);
    sig = 1.0 / std::sqrt(mu);
    x = z;
    normalize(x);
    iters = it;
    if (prev >= 0.0 && std::abs(sig - prev) <= tol * std::max(sig, 1.0))
      return sig;
    prev = sig;
  }
  throw NoConvergence("inverse power iteration did not meet tolerance",
                      max_iters);
}

}  // namespace

std::vector<SpectrumPoint> spectrum_certificates(
    const CesaroContext& ctx, const std::vector<Complex>& lambdas, double tol,
    std::int64_t max_iters) {
  std::vector<SpectrumPoint> out;
  out.reserve(lambdas.size());
  for (Complex lam : lambdas) {
    SpectrumPoint p;
    p.lambda = lam;
    double dist = std::abs(lam - Complex{1.0, 0.0});
    if (dist < 1.0) {
      p.kind = SpectrumPoint::Kind::inside_disc;
      p.value = adjoint_path_eigenvector(ctx, lam, 0).residual;
    } else if (dist > 1.0 + kDiscMargin) {
      p.kind = SpectrumPoint::Kind::outside_disc;
      std::int64_t iters = 0;
      p.value =
          smallest_singular_value(*ctx.tree, lam, tol, max_iters, iters);
      p.iterations = iters;
    } else {
      p.kind = SpectrumPoint::Kind::boundary_ring;
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace cesaro
