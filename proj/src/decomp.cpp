#include "cesaro/decomp.hpp"

#include <algorithm>
#include <cmath>

#include "cesaro/errors.hpp"

namespace cesaro {

DecompositionReport decompose(const RootedTree& tree, const TreeGenSpec& spec,
                              std::int64_t dense_cap) {
  std::int64_t k = 0;
  switch (spec.kind) {
    case TreeKind::path:
      k = 0;
      break;
    case TreeKind::kary_root:
      k = 1;
      break;
    case TreeKind::comb:
    case TreeKind::widening:
      throw InfiniteBranchingIndex(
          "the family keeps branching at every depth; no trunk/branch split "
          "exists");
    case TreeKind::explicit_edges:
      throw MalformedSpec(
          "decomposition needs a generator family with a known branching "
          "index");
  }
  if (tree.truncation_depth <= k)
    throw TruncationTooShallow(
        "truncation must reach past the branching index");

  DecompositionReport rep;
  rep.k_T = k;
  // BFS ids are depth-sorted, so the trunk is the id prefix below level k.
  for (VertexId v = tree.level_offset[0]; v < tree.level_offset[k]; ++v)
    rep.trunk_vertices.push_back(v);
  rep.trunk_dim = static_cast<std::int64_t>(rep.trunk_vertices.size());
  for (VertexId h = tree.level_offset[k]; h < tree.level_offset[k + 1]; ++h)
    rep.branch_heads.push_back(h);
  rep.d = static_cast<std::int64_t>(rep.branch_heads.size());

  std::int64_t covered = rep.trunk_dim;
  std::int64_t shortest = tree.vertex_count;
  for (VertexId h : rep.branch_heads) {
    std::vector<VertexId> chain;
    VertexId v = h;
    chain.push_back(v);
    while (!tree.is_childless(v)) {
      if (tree.child_count(v) != 1)
        throw MalformedSpec("branch below the trunk is not a pure chain");
      v = tree.first_child(v);
      chain.push_back(v);
    }
    covered += static_cast<std::int64_t>(chain.size());
    shortest = std::min(shortest, static_cast<std::int64_t>(chain.size()));
    rep.branch_chains.push_back(std::move(chain));
  }
  if (covered != tree.vertex_count)
    throw MalformedSpec("trunk and branches do not partition the vertex set");

  CesaroContext ctx(tree);
  DenseMatrix dense = assemble_dense(ctx, dense_cap);

  // block_of[v]: -1 for trunk, branch index otherwise.
  std::vector<std::int64_t> block_of(tree.vertex_count, -1);
  for (std::int64_t i = 0; i < rep.d; ++i)
    for (VertexId v : rep.branch_chains[i]) block_of[v] = i;

  rep.block_pattern_exact = true;
  rep.max_offblock_abs = 0.0;
  for (std::int64_t r = 0; r < tree.vertex_count; ++r) {
    for (std::int64_t c = 0; c < tree.vertex_count; ++c) {
      bool off_pattern =
          (block_of[r] == -1 && block_of[c] != -1) ||
          (block_of[r] != -1 && block_of[c] != -1 && block_of[r] != block_of[c]);
      if (!off_pattern) continue;
      double e = dense.at(r, c);
      if (e != 0.0) {
        rep.block_pattern_exact = false;
        rep.max_offblock_abs = std::max(rep.max_offblock_abs, std::abs(e));
      }
    }
  }

  // Each branch block, indexed by chain position, should equal the classical
  // averaging matrix minus the closed-form perturbation.
  rep.perturbation_M = std::min<std::int64_t>(shortest, 512);
  PerturbationMatrix pert = perturbation_entries(k, rep.perturbation_M);
  for (const auto& chain : rep.branch_chains) {
    for (std::int64_t m = 0; m < rep.perturbation_M; ++m) {
      for (std::int64_t n = 0; n < rep.perturbation_M; ++n) {
        double classical =
            (n <= m) ? 1.0 / static_cast<double>(m + 1) : 0.0;
        double block = dense.at(chain[m], chain[n]);
        double dev = std::abs((classical - block) - pert.at(m, n));
        rep.perturbation_max_dev = std::max(rep.perturbation_max_dev, dev);
      }
    }
  }
  return rep;
}

PerturbationMatrix perturbation_entries(std::int64_t k, std::int64_t M) {
  if (k < 0 || M < 0) throw MalformedSpec("perturbation needs k, M >= 0");
  PerturbationMatrix p;
  p.k = k;
  p.M = M;
  p.a.assign(static_cast<std::size_t>(M) * static_cast<std::size_t>(M), 0.0);
  for (std::int64_t m = 0; m < M; ++m) {
    double row = static_cast<double>(k) /
                 (static_cast<double>(k + m + 1) * static_cast<double>(m + 1));
    for (std::int64_t n = 0; n <= m; ++n) p.a[m * M + n] = row;
  }
  return p;
}

CompactnessDiagnostics compactness_diagnostics(std::int64_t k, std::int64_t M,
                                               std::int64_t J) {
  if (k < 0 || M < 1 || J < 1)
    throw MalformedSpec("diagnostics need k >= 0, M >= 1, J >= 1");
  CompactnessDiagnostics diag;
  diag.k = k;
  diag.delta.resize(M);
  diag.gamma.resize(M);

  const double dk = static_cast<double>(k);
  for (std::int64_t m = 0; m < M; ++m) {
    // Row sum summed entry by entry; the closed form k/(k+m+1) is what the
    // comparison below targets.
    KahanSum row;
    double entry =
        dk / (static_cast<double>(k + m + 1) * static_cast<double>(m + 1));
    for (std::int64_t n = 0; n <= m; ++n) row.add(entry);
    diag.delta[m] = row.value();
    double closed_row = dk / static_cast<double>(k + m + 1);
    diag.max_direct_closed_dev =
        std::max(diag.max_direct_closed_dev, std::abs(diag.delta[m] - closed_row));
  }

  // Column sum closed form: the harmonic slice over (n, n+k].
  std::vector<double> H(M + k + 1, 0.0);
  {
    KahanSum h;
    for (std::int64_t i = 1; i <= M + k; ++i) {
      h.add(1.0 / static_cast<double>(i));
      H[i] = h.value();
    }
  }
  for (std::int64_t n = 0; n < M; ++n) diag.gamma[n] = H[n + k] - H[n];

  // Direct cross-check on the leading columns plus logarithmically spaced
  // samples: partial sums of the infinite column plus a remainder bracket.
  std::vector<std::int64_t> cols;
  for (std::int64_t n = 0; n < std::min<std::int64_t>(M, 64); ++n)
    cols.push_back(n);
  for (std::int64_t n = 64; n < M; n *= 2) cols.push_back(n);
  std::sort(cols.begin(), cols.end());
  cols.erase(std::unique(cols.begin(), cols.end()), cols.end());

  for (std::int64_t n : cols) {
    KahanSum part;
    for (std::int64_t m = n; m < n + J; ++m)
      part.add(dk /
               (static_cast<double>(m + 1) * static_cast<double>(k + m + 1)));
    double direct = part.value() + harmonic_gap_tail(n + J - 1, k).mid();
    diag.max_direct_closed_dev =
        std::max(diag.max_direct_closed_dev, std::abs(direct - diag.gamma[n]));
    diag.verified_columns.push_back(n);
  }
  return diag;
}

}  // namespace cesaro
