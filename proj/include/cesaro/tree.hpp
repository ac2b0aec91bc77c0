#pragma once

// Finite depth-truncations of rooted directed trees. Vertices carry dense
// BFS-ordered ids: depth is nondecreasing in id, and within a level the order
// follows the generator (or, for explicit edge lists, the ingestion order).
// That ordering is what makes the averaging operator lower triangular and
// every traversal a flat array pass.

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cesaro {

using VertexId = std::int64_t;
inline constexpr VertexId kNoVertex = -1;

enum class TreeKind { path, kary_root, comb, widening, explicit_edges };

const char* tree_kind_name(TreeKind kind);

struct TreeGenSpec {
  TreeKind kind = TreeKind::path;
  std::int64_t k = 0;  // kary_root arity, >= 2
  std::int64_t truncate_depth = 0;
  // explicit_edges only: (parent, child) pairs over user labels; label 0 is
  // the root. Labels are remapped to BFS ids on build.
  std::vector<std::pair<std::int64_t, std::int64_t>> edges;
};

TreeGenSpec path_spec(std::int64_t depth);
TreeGenSpec kary_spec(std::int64_t k, std::int64_t depth);
TreeGenSpec comb_spec(std::int64_t depth);
TreeGenSpec widening_spec(std::int64_t depth);
TreeGenSpec explicit_spec(
    std::vector<std::pair<std::int64_t, std::int64_t>> edges);

struct RootedTree {
  std::int64_t vertex_count = 0;
  VertexId root = 0;
  std::int64_t truncation_depth = 0;
  std::vector<VertexId> parent;         // kNoVertex at the root
  std::vector<std::int64_t> depth;      // per vertex
  std::vector<std::int64_t> child_offset;  // size vertex_count+1; BFS ids make
                                           // each child list a contiguous
                                           // id range
  std::vector<std::int64_t> level_offset;  // size levels()+1
  std::vector<std::uint8_t> frontier;   // 1 where children were cut by the
                                        // truncation (infinite families only)
  std::uint64_t uid = 0;                // binds StateVectors to this tree

  std::int64_t levels() const {
    return static_cast<std::int64_t>(level_offset.size()) - 1;
  }
  std::int64_t level_size(std::int64_t d) const {
    return level_offset[d + 1] - level_offset[d];
  }
  std::int64_t child_count(VertexId v) const {
    return child_offset[v + 1] - child_offset[v];
  }
  VertexId first_child(VertexId v) const {
    return static_cast<VertexId>(child_offset[v]);
  }
  bool is_childless(VertexId v) const { return child_count(v) == 0; }
  // A leaf of the intended (possibly infinite) tree, as opposed to a
  // truncation cut.
  bool is_genuine_leaf(VertexId v) const {
    return is_childless(v) && !frontier[v];
  }
};

struct TreeMetrics {
  std::vector<std::int64_t> level_sizes;
  // nullopt encodes "exceeds-truncation": the generator does not guarantee
  // eventually-constant level sizes, so no finite width is reported.
  std::optional<std::int64_t> width;
  // nullopt encodes "unbounded-at-truncation" (branching vertices at every
  // depth of the infinite family).
  std::optional<std::int64_t> branching_index;
  bool is_leafless = false;
  std::vector<VertexId> branching_vertices;
  std::int64_t leaf_count = 0;
};

RootedTree build_tree(const TreeGenSpec& spec);
TreeMetrics compute_metrics(const RootedTree& tree, const TreeGenSpec& spec);

// Level-occupancy diagnostics M_{alpha,j} = level_size(j) / (j+1)^alpha for
// j = 0..J, plus the supremum over that range.
struct MAlphaResult {
  double alpha = 0.0;
  std::vector<double> values;
  double sup = 0.0;
};
MAlphaResult m_alpha_sequence(const RootedTree& tree, double alpha,
                              std::int64_t J);

// Up to `limit` maximal root-to-bottom chains, depth-first with children in
// id order, each chain a sequence of vertex ids starting at the root.
std::vector<std::vector<VertexId>> enumerate_paths(const RootedTree& tree,
                                                   std::int64_t limit);

// Generation counts card(Chi^<j>(w)) of the *untruncated* tree, as far as the
// generator determines them. Drives the image-norm series and the domain
// test.
struct GenerationCounts {
  enum class Shape {
    eventually_constant,  // count(j) = eventual for j >= head length
    affine,               // count(j) = affine_offset + j for j >= 1 (widening
                          // trunk); diverging level growth
    finite_list,          // explicit trees: head is the whole profile
  };
  Shape shape = Shape::eventually_constant;
  std::vector<std::int64_t> head;  // exact counts for small j; head[0] == 1
  std::int64_t eventual = 0;
  std::int64_t affine_offset = 0;

  std::int64_t count(std::int64_t j) const;
};
GenerationCounts generation_counts(const RootedTree& tree,
                                   const TreeGenSpec& spec, VertexId w);

}  // namespace cesaro
