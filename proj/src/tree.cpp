#include "cesaro/tree.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <numeric>

#include "cesaro/errors.hpp"

namespace cesaro {

namespace {

std::atomic<std::uint64_t> g_tree_uid{1};

// Arrays below cost ~40 bytes/vertex; anything past this is a request error,
// not a build we should attempt.
constexpr std::int64_t kMaxVertices = std::int64_t{1} << 31;

void check_vertex_budget(__int128 count) {
  if (count > kMaxVertices)
    throw TooLarge("requested truncation exceeds the vertex budget");
}

// Finish a generator build from per-vertex child counts: in BFS order the
// children of v occupy the contiguous id range starting at 1 + sum of counts
// over ids < v.
void finish_from_counts(RootedTree& t, const std::vector<std::int64_t>& cnt) {
  const std::int64_t n = t.vertex_count;
  t.child_offset.assign(n + 1, 0);
  std::int64_t acc = 1;
  for (std::int64_t v = 0; v < n; ++v) {
    t.child_offset[v] = acc;
    acc += cnt[v];
  }
  t.child_offset[n] = acc;

  t.parent.assign(n, kNoVertex);
  t.depth.assign(n, 0);
  for (std::int64_t v = 0; v < n; ++v) {
    for (std::int64_t c = t.child_offset[v]; c < t.child_offset[v + 1]; ++c) {
      t.parent[c] = v;
      t.depth[c] = t.depth[v] + 1;
    }
  }

  std::int64_t max_depth = 0;
  for (std::int64_t v = 0; v < n; ++v) max_depth = std::max(max_depth, t.depth[v]);
  t.level_offset.assign(max_depth + 2, 0);
  for (std::int64_t v = 0; v < n; ++v) t.level_offset[t.depth[v] + 1]++;
  for (std::size_t d = 1; d < t.level_offset.size(); ++d)
    t.level_offset[d] += t.level_offset[d - 1];
}

RootedTree build_path(std::int64_t N) {
  RootedTree t;
  t.truncation_depth = N;
  t.vertex_count = N + 1;
  std::vector<std::int64_t> cnt(t.vertex_count, 1);
  cnt[N] = 0;
  finish_from_counts(t, cnt);
  t.frontier.assign(t.vertex_count, 0);
  t.frontier[N] = 1;
  return t;
}

RootedTree build_kary(std::int64_t k, std::int64_t N) {
  RootedTree t;
  t.truncation_depth = N;
  check_vertex_budget(__int128{1} + __int128(k) * N);
  t.vertex_count = 1 + k * N;
  std::vector<std::int64_t> cnt(t.vertex_count, 1);
  cnt[0] = (N >= 1) ? k : 0;
  t.frontier.assign(t.vertex_count, 0);
  if (N == 0) {
    t.frontier[0] = 1;
  } else {
    for (std::int64_t i = 0; i < k; ++i) {
      VertexId tip = 1 + k * (N - 1) + i;
      cnt[tip] = 0;
      t.frontier[tip] = 1;
    }
  }
  finish_from_counts(t, cnt);
  return t;
}

RootedTree build_comb(std::int64_t N) {
  RootedTree t;
  t.truncation_depth = N;
  check_vertex_budget(__int128{2} * N + 1);
  t.vertex_count = 2 * N + 1;
  // Spine vertex at depth j has id 2j-1 (0 at the root), its tooth child sits
  // at depth j+1 with id 2j+2; each spine vertex has children {next spine,
  // tooth} in that order.
  std::vector<std::int64_t> cnt(t.vertex_count, 0);
  t.frontier.assign(t.vertex_count, 0);
  if (N == 0) {
    t.frontier[0] = 1;
  } else {
    cnt[0] = 2;
    for (std::int64_t j = 1; j < N; ++j) cnt[2 * j - 1] = 2;
    t.frontier[2 * N - 1] = 1;
  }
  finish_from_counts(t, cnt);
  return t;
}

RootedTree build_widening(std::int64_t N) {
  RootedTree t;
  t.truncation_depth = N;
  check_vertex_budget(__int128{1} + (__int128(N) * (N + 1)) / 2);
  t.vertex_count = 1 + N * (N + 1) / 2;
  // Level j >= 1 holds the trunk vertex v_j first, then the j-1 leaves
  // hanging off v_{j-1}; all of level j+1 descends from v_j.
  std::vector<std::int64_t> cnt(t.vertex_count, 0);
  t.frontier.assign(t.vertex_count, 0);
  for (std::int64_t j = 0; j < N; ++j) {
    std::int64_t vj = (j == 0) ? 0 : 1 + j * (j - 1) / 2;  // id of v_j
    cnt[vj] = j + 1;
  }
  t.frontier[N == 0 ? 0 : 1 + N * (N - 1) / 2] = 1;
  finish_from_counts(t, cnt);
  return t;
}

RootedTree build_explicit(
    const std::vector<std::pair<std::int64_t, std::int64_t>>& edges) {
  // User labels -> adjacency in ingestion order, then BFS relabelling.
  std::map<std::int64_t, std::vector<std::int64_t>> children;
  std::map<std::int64_t, std::int64_t> indegree;
  indegree[0] = 0;
  for (const auto& [p, c] : edges) {
    if (p < 0 || c < 0) throw MalformedSpec("negative vertex label");
    if (c == 0) throw MalformedSpec("root (label 0) may not be a child");
    if (p == c) throw MalformedSpec("self-loop edge");
    auto& inc = indegree[c];
    if (inc > 0)
      throw MalformedSpec("vertex " + std::to_string(c) +
                          " has multiple parents or a duplicate edge");
    inc = 1;
    indegree.try_emplace(p, indegree.count(p) ? indegree[p] : 0);
    children[p].push_back(c);
  }
  for (const auto& [label, deg] : indegree) {
    if (label != 0 && deg == 0)
      throw MalformedSpec("vertex " + std::to_string(label) +
                          " has no parent (second root)");
  }

  // BFS from the root over user labels.
  std::vector<std::int64_t> order{0};
  std::map<std::int64_t, std::int64_t> id_of{{0, 0}};
  for (std::size_t head = 0; head < order.size(); ++head) {
    auto it = children.find(order[head]);
    if (it == children.end()) continue;
    for (std::int64_t c : it->second) {
      id_of.emplace(c, static_cast<std::int64_t>(order.size()));
      order.push_back(c);
    }
  }
  if (order.size() != indegree.size())
    throw MalformedSpec("edge list is disconnected or cyclic");

  RootedTree t;
  t.vertex_count = static_cast<std::int64_t>(order.size());
  std::vector<std::int64_t> cnt(t.vertex_count, 0);
  for (std::int64_t v = 0; v < t.vertex_count; ++v) {
    auto it = children.find(order[v]);
    cnt[v] = it == children.end()
                 ? 0
                 : static_cast<std::int64_t>(it->second.size());
  }
  finish_from_counts(t, cnt);
  t.frontier.assign(t.vertex_count, 0);  // complete finite tree: no frontier
  t.truncation_depth = t.levels() - 1;
  return t;
}

bool is_comb_spine(VertexId v) { return v == 0 || (v % 2 == 1); }

}  // namespace

const char* tree_kind_name(TreeKind kind) {
  switch (kind) {
    case TreeKind::path: return "path";
    case TreeKind::kary_root: return "kary_root";
    case TreeKind::comb: return "comb";
    case TreeKind::widening: return "widening";
    case TreeKind::explicit_edges: return "explicit";
  }
  return "?";
}

TreeGenSpec path_spec(std::int64_t depth) {
  TreeGenSpec s;
  s.kind = TreeKind::path;
  s.truncate_depth = depth;
  return s;
}

TreeGenSpec kary_spec(std::int64_t k, std::int64_t depth) {
  TreeGenSpec s;
  s.kind = TreeKind::kary_root;
  s.k = k;
  s.truncate_depth = depth;
  return s;
}

TreeGenSpec comb_spec(std::int64_t depth) {
  TreeGenSpec s;
  s.kind = TreeKind::comb;
  s.truncate_depth = depth;
  return s;
}

TreeGenSpec widening_spec(std::int64_t depth) {
  TreeGenSpec s;
  s.kind = TreeKind::widening;
  s.truncate_depth = depth;
  return s;
}

TreeGenSpec explicit_spec(
    std::vector<std::pair<std::int64_t, std::int64_t>> edges) {
  TreeGenSpec s;
  s.kind = TreeKind::explicit_edges;
  s.edges = std::move(edges);
  return s;
}

RootedTree build_tree(const TreeGenSpec& spec) {
  if (spec.kind != TreeKind::explicit_edges && spec.truncate_depth < 0)
    throw MalformedSpec("truncate_depth must be nonnegative");
  RootedTree t;
  switch (spec.kind) {
    case TreeKind::path:
      t = build_path(spec.truncate_depth);
      break;
    case TreeKind::kary_root:
      if (spec.k < 2) throw MalformedSpec("kary_root requires k >= 2");
      t = build_kary(spec.k, spec.truncate_depth);
      break;
    case TreeKind::comb:
      t = build_comb(spec.truncate_depth);
      break;
    case TreeKind::widening:
      t = build_widening(spec.truncate_depth);
      break;
    case TreeKind::explicit_edges:
      t = build_explicit(spec.edges);
      break;
  }
  t.uid = g_tree_uid.fetch_add(1);
  return t;
}

TreeMetrics compute_metrics(const RootedTree& tree, const TreeGenSpec& spec) {
  TreeMetrics m;
  m.level_sizes.resize(tree.levels());
  for (std::int64_t d = 0; d < tree.levels(); ++d)
    m.level_sizes[d] = tree.level_size(d);

  std::int64_t max_level =
      *std::max_element(m.level_sizes.begin(), m.level_sizes.end());
  switch (spec.kind) {
    case TreeKind::path:
    case TreeKind::kary_root:
    case TreeKind::comb:
    case TreeKind::explicit_edges:
      m.width = max_level;  // level sizes are eventually constant (or the
                            // tree is complete), so the max is the width
      break;
    case TreeKind::widening:
      m.width = std::nullopt;  // level sizes still growing at the truncation
      break;
  }

  for (VertexId v = 0; v < tree.vertex_count; ++v)
    if (tree.child_count(v) >= 2) m.branching_vertices.push_back(v);

  switch (spec.kind) {
    case TreeKind::path:
      m.branching_index = 0;
      break;
    case TreeKind::kary_root:
      m.branching_index = 1;
      break;
    case TreeKind::comb:
    case TreeKind::widening:
      // branching vertices at every depth of the infinite family
      m.branching_index = std::nullopt;
      break;
    case TreeKind::explicit_edges: {
      std::int64_t bi = 0;
      for (VertexId v : m.branching_vertices)
        bi = std::max(bi, tree.depth[v] + 1);
      m.branching_index = bi;
      break;
    }
  }

  m.leaf_count = 0;
  for (VertexId v = 0; v < tree.vertex_count; ++v)
    if (tree.is_genuine_leaf(v)) m.leaf_count++;

  switch (spec.kind) {
    case TreeKind::path:
    case TreeKind::kary_root:
      m.is_leafless = true;
      break;
    case TreeKind::comb:
    case TreeKind::widening:
      m.is_leafless = false;
      break;
    case TreeKind::explicit_edges:
      m.is_leafless = (m.leaf_count == 0);
      break;
  }
  return m;
}

MAlphaResult m_alpha_sequence(const RootedTree& tree, double alpha,
                              std::int64_t J) {
  if (J > tree.truncation_depth || J >= tree.levels())
    throw DepthExceeded("level query beyond the truncation depth");
  MAlphaResult r;
  r.alpha = alpha;
  r.values.resize(J + 1);
  r.sup = 0.0;
  for (std::int64_t j = 0; j <= J; ++j) {
    double v = static_cast<double>(tree.level_size(j)) /
               std::pow(static_cast<double>(j + 1), alpha);
    r.values[j] = v;
    r.sup = std::max(r.sup, v);
  }
  return r;
}

std::vector<std::vector<VertexId>> enumerate_paths(const RootedTree& tree,
                                                   std::int64_t limit) {
  std::vector<std::vector<VertexId>> out;
  if (limit < 1) return out;
  // Depth-first with children in id order; the chain is the current stack.
  std::vector<VertexId> chain{tree.root};
  std::vector<std::int64_t> next{tree.child_offset[tree.root]};
  while (!chain.empty()) {
    VertexId v = chain.back();
    if (next.back() < tree.child_offset[v + 1]) {
      VertexId c = next.back()++;
      chain.push_back(c);
      next.push_back(tree.child_offset[c]);
    } else {
      if (tree.is_childless(v)) {
        out.push_back(chain);
        if (static_cast<std::int64_t>(out.size()) >= limit) return out;
      }
      chain.pop_back();
      next.pop_back();
    }
  }
  return out;
}

std::int64_t GenerationCounts::count(std::int64_t j) const {
  if (j < static_cast<std::int64_t>(head.size())) return head[j];
  switch (shape) {
    case Shape::eventually_constant: return eventual;
    case Shape::affine: return affine_offset + j;
    case Shape::finite_list: return 0;
  }
  return 0;
}

GenerationCounts generation_counts(const RootedTree& tree,
                                   const TreeGenSpec& spec, VertexId w) {
  if (w < 0 || w >= tree.vertex_count)
    throw MalformedSpec("vertex id out of range");
  GenerationCounts g;
  g.head = {1};
  switch (spec.kind) {
    case TreeKind::path:
      g.eventual = 1;
      break;
    case TreeKind::kary_root:
      g.eventual = (w == tree.root) ? spec.k : 1;
      break;
    case TreeKind::comb:
      g.eventual = is_comb_spine(w) ? 2 : 0;
      break;
    case TreeKind::widening: {
      bool trunk = (w == tree.level_offset[tree.depth[w]]);
      if (trunk) {
        g.shape = GenerationCounts::Shape::affine;
        g.affine_offset = tree.depth[w];
      } else {
        g.eventual = 0;
      }
      break;
    }
    case TreeKind::explicit_edges: {
      g.shape = GenerationCounts::Shape::finite_list;
      // Generation sizes under w by a frontier sweep over the finite tree.
      std::vector<VertexId> cur{w};
      while (!cur.empty()) {
        std::vector<VertexId> nxt;
        for (VertexId v : cur)
          for (std::int64_t c = tree.child_offset[v];
               c < tree.child_offset[v + 1]; ++c)
            nxt.push_back(c);
        if (!nxt.empty()) g.head.push_back(static_cast<std::int64_t>(nxt.size()));
        cur = std::move(nxt);
      }
      break;
    }
  }
  return g;
}

}  // namespace cesaro
