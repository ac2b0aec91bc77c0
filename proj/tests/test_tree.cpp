#include <doctest.h>

#include "cesaro/errors.hpp"
#include "cesaro/tree.hpp"

using namespace cesaro;

TEST_CASE("path truncation: ids are depths, single frontier tip") {
  RootedTree t = build_tree(path_spec(6));
  CHECK(t.vertex_count == 7);
  CHECK(t.truncation_depth == 6);
  for (VertexId v = 0; v < 7; ++v) {
    CHECK(t.depth[v] == v);
    CHECK(t.parent[v] == (v == 0 ? kNoVertex : v - 1));
  }
  for (VertexId v = 0; v < 6; ++v) {
    CHECK(t.child_count(v) == 1);
    CHECK(t.first_child(v) == v + 1);
    CHECK(!t.frontier[v]);
  }
  CHECK(t.frontier[6]);
  CHECK(!t.is_genuine_leaf(6));

  TreeMetrics m = compute_metrics(t, path_spec(6));
  CHECK(m.width == 1);
  CHECK(m.branching_index == 0);
  CHECK(m.is_leafless);
  CHECK(m.leaf_count == 0);
  CHECK(m.branching_vertices.empty());

  auto paths = enumerate_paths(t, 10);
  REQUIRE(paths.size() == 1);
  CHECK(paths[0].size() == 7);
}

TEST_CASE("kary_root truncation: arms are contiguous chains") {
  TreeGenSpec spec = kary_spec(3, 4);
  RootedTree t = build_tree(spec);
  CHECK(t.vertex_count == 13);
  CHECK(t.level_size(0) == 1);
  for (int d = 1; d <= 4; ++d) CHECK(t.level_size(d) == 3);
  CHECK(t.child_count(0) == 3);
  CHECK(t.first_child(0) == 1);
  // Arm structure: the j-th vertex of level d has the j-th vertex of level
  // d+1 as its only child.
  for (VertexId v = 1; v <= 9; ++v) {
    CHECK(t.child_count(v) == 1);
    CHECK(t.first_child(v) == v + 3);
  }
  for (VertexId v = 10; v <= 12; ++v) {
    CHECK(t.is_childless(v));
    CHECK(t.frontier[v]);
  }

  TreeMetrics m = compute_metrics(t, spec);
  CHECK(m.width == 3);
  CHECK(m.branching_index == 1);
  CHECK(m.is_leafless);
  REQUIRE(m.branching_vertices.size() == 1);
  CHECK(m.branching_vertices[0] == 0);

  auto paths = enumerate_paths(t, 10);
  CHECK(paths.size() == 3);
  for (const auto& p : paths) CHECK(p.size() == 5);
}

TEST_CASE("comb truncation: spine and teeth interleave, teeth are leaves") {
  TreeGenSpec spec = comb_spec(5);
  RootedTree t = build_tree(spec);
  CHECK(t.vertex_count == 11);
  CHECK(t.level_size(0) == 1);
  for (int d = 1; d <= 5; ++d) CHECK(t.level_size(d) == 2);

  // Spine vertices sit at odd ids (root aside); each has a spine child and a
  // tooth child until the cut.
  CHECK(t.child_count(0) == 2);
  CHECK(t.first_child(0) == 1);
  VertexId spine = 1;
  for (int j = 1; j < 5; ++j) {
    CHECK(t.child_count(spine) == 2);
    CHECK(t.first_child(spine) == spine + 2);
    spine += 2;
  }
  CHECK(t.is_childless(9));   // bottom spine vertex, cut by the truncation
  CHECK(t.frontier[9]);
  CHECK(t.is_genuine_leaf(10));  // its sibling tooth is a real leaf

  TreeMetrics m = compute_metrics(t, spec);
  CHECK(m.width == 2);
  CHECK(!m.branching_index.has_value());
  CHECK(!m.is_leafless);
  CHECK(m.leaf_count == 5);
  CHECK(m.branching_vertices.size() == 5);
}

TEST_CASE("widening truncation: level j has j vertices, one trunk vertex") {
  TreeGenSpec spec = widening_spec(4);
  RootedTree t = build_tree(spec);
  CHECK(t.vertex_count == 11);  // 1 + 4*5/2
  CHECK(t.level_size(0) == 1);
  CHECK(t.level_size(1) == 1);
  CHECK(t.level_size(2) == 2);
  CHECK(t.level_size(3) == 3);
  CHECK(t.level_size(4) == 4);

  // Trunk ids 0, 1, 2, 4, 7; each trunk vertex owns the whole next level.
  CHECK(t.child_count(0) == 1);
  CHECK(t.child_count(1) == 2);
  CHECK(t.child_count(2) == 3);
  CHECK(t.child_count(4) == 4);
  CHECK(t.first_child(2) == 4);
  CHECK(t.first_child(4) == 7);
  CHECK(t.frontier[7]);          // the cut trunk vertex
  CHECK(t.is_genuine_leaf(3));   // off-trunk vertices never get children
  CHECK(t.is_genuine_leaf(10));

  TreeMetrics m = compute_metrics(t, spec);
  CHECK(!m.width.has_value());
  CHECK(!m.branching_index.has_value());
  CHECK(!m.is_leafless);
}

TEST_CASE("explicit edges: labels remap to level order") {
  TreeGenSpec spec = explicit_spec({{0, 7}, {7, 3}, {0, 5}, {5, 9}, {9, 2}});
  RootedTree t = build_tree(spec);
  CHECK(t.vertex_count == 6);
  CHECK(t.truncation_depth == 3);
  // Level order with ingestion tie-break: 0 | 7 5 | 3 9 | 2.
  CHECK(t.depth[1] == 1);
  CHECK(t.depth[2] == 1);
  CHECK(t.parent[3] == 1);
  CHECK(t.parent[4] == 2);
  CHECK(t.parent[5] == 4);
  CHECK(t.is_genuine_leaf(3));
  CHECK(t.is_genuine_leaf(5));
  for (VertexId v = 0; v < 6; ++v) CHECK(!t.frontier[v]);

  TreeMetrics m = compute_metrics(t, spec);
  CHECK(m.width == 2);
  CHECK(m.branching_index == 1);  // branching stops below depth 1
  CHECK(m.leaf_count == 2);
}

TEST_CASE("explicit edges: malformed inputs are rejected") {
  CHECK_THROWS_AS(build_tree(explicit_spec({{0, 1}, {2, 1}})), MalformedSpec);
  CHECK_THROWS_AS(build_tree(explicit_spec({{0, 1}, {2, 3}})), MalformedSpec);
  CHECK_THROWS_AS(build_tree(explicit_spec({{0, 0}})), MalformedSpec);
  CHECK_THROWS_AS(build_tree(explicit_spec({{1, 0}})), MalformedSpec);
  CHECK_THROWS_AS(build_tree(explicit_spec({{0, -4}})), MalformedSpec);
  CHECK_THROWS_AS(build_tree(explicit_spec({{0, 1}, {1, 2}, {2, 1}})),
                  MalformedSpec);
}

TEST_CASE("generator validation and size guard") {
  TreeGenSpec bad = kary_spec(0, 4);
  CHECK_THROWS_AS(build_tree(bad), MalformedSpec);
  TreeGenSpec neg = path_spec(0);
  neg.truncate_depth = -1;
  CHECK_THROWS_AS(build_tree(neg), MalformedSpec);
  // ~4.5e12 vertices: must be refused before any allocation happens.
  CHECK_THROWS_AS(build_tree(widening_spec(3000000)), TooLarge);
}

TEST_CASE("generation counts track the infinite family, not the cut") {
  RootedTree path = build_tree(path_spec(8));
  GenerationCounts g = generation_counts(path, path_spec(8), 5);
  CHECK(g.shape == GenerationCounts::Shape::eventually_constant);
  CHECK(g.eventual == 1);
  CHECK(g.count(0) == 1);
  CHECK(g.count(1000) == 1);

  RootedTree kary = build_tree(kary_spec(4, 3));
  GenerationCounts gr = generation_counts(kary, kary_spec(4, 3), 0);
  CHECK(gr.count(0) == 1);
  CHECK(gr.count(1) == 4);
  CHECK(gr.count(7) == 4);
  GenerationCounts ga = generation_counts(kary, kary_spec(4, 3), 2);
  CHECK(ga.eventual == 1);

  RootedTree comb = build_tree(comb_spec(6));
  GenerationCounts gs = generation_counts(comb, comb_spec(6), 3);  // spine
  CHECK(gs.count(0) == 1);
  CHECK(gs.count(1) == 2);
  CHECK(gs.count(50) == 2);
  GenerationCounts gt = generation_counts(comb, comb_spec(6), 4);  // tooth
  CHECK(gt.count(0) == 1);
  CHECK(gt.count(1) == 0);

  RootedTree wide = build_tree(widening_spec(6));
  GenerationCounts gw = generation_counts(wide, widening_spec(6), 2);
  CHECK(gw.shape == GenerationCounts::Shape::affine);
  CHECK(gw.count(0) == 1);
  CHECK(gw.count(1) == 3);   // trunk vertex at depth 2 owns level 3
  CHECK(gw.count(10) == 12);
  GenerationCounts gl = generation_counts(wide, widening_spec(6), 3);
  CHECK(gl.count(1) == 0);  // off-trunk vertices are leaves

  RootedTree ex = build_tree(explicit_spec({{0, 1}, {0, 2}, {1, 3}}));
  GenerationCounts ge =
      generation_counts(ex, explicit_spec({{0, 1}, {0, 2}, {1, 3}}), 0);
  CHECK(ge.shape == GenerationCounts::Shape::finite_list);
  CHECK(ge.count(1) == 2);
  CHECK(ge.count(2) == 1);
  CHECK(ge.count(3) == 0);
}

TEST_CASE("level occupancy diagnostics") {
  RootedTree wide = build_tree(widening_spec(50));
  MAlphaResult r = m_alpha_sequence(wide, 1.0, 50);
  // Level j carries j vertices against weight j+1, so the ratio approaches
  // but never exceeds the root's value of one.
  CHECK(r.values[0] == 1.0);
  CHECK(r.values[10] == doctest::Approx(10.0 / 11.0).epsilon(1e-15));
  CHECK(r.sup == 1.0);

  RootedTree path = build_tree(path_spec(10));
  MAlphaResult p0 = m_alpha_sequence(path, 0.0, 10);
  CHECK(p0.sup == 1.0);
  CHECK_THROWS_AS(m_alpha_sequence(path, 0.0, 11), DepthExceeded);
}
