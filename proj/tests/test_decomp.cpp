#include <doctest.h>

#include <cmath>

#include "cesaro/decomp.hpp"
#include "cesaro/errors.hpp"
#include "cesaro/series.hpp"
#include "cesaro/tree.hpp"

using namespace cesaro;

TEST_CASE("classical tree decomposes into a single branch") {
  TreeGenSpec spec = path_spec(16);
  RootedTree t = build_tree(spec);
  DecompositionReport r = decompose(t, spec);
  CHECK(r.k_T == 0);
  CHECK(r.trunk_dim == 0);
  CHECK(r.d == 1);
  REQUIRE(r.branch_chains.size() == 1);
  CHECK(r.branch_chains[0].size() == 17);
  CHECK(r.block_pattern_exact);
  CHECK(r.max_offblock_abs == 0.0);
  // One branch at branching index zero: the perturbation is identically zero
  // and the branch block *is* the classical section.
  CHECK(r.perturbation_max_dev == 0.0);
  CHECK(r.perturbation_M == 17);
}

TEST_CASE("branching tree splits into trunk and chain branches") {
  TreeGenSpec spec = kary_spec(3, 20);
  RootedTree t = build_tree(spec);
  DecompositionReport r = decompose(t, spec);
  CHECK(r.k_T == 1);
  CHECK(r.trunk_dim == 1);
  CHECK(r.trunk_vertices == std::vector<VertexId>{0});
  CHECK(r.d == 3);
  CHECK(r.branch_heads == std::vector<VertexId>{1, 2, 3});
  for (const auto& chain : r.branch_chains) CHECK(chain.size() == 20);
  CHECK(r.block_pattern_exact);
  CHECK(r.max_offblock_abs == 0.0);
  CHECK(r.perturbation_M == 20);
  // Branch blocks differ from the classical section exactly by the
  // closed-form perturbation, up to double rounding.
  CHECK(r.perturbation_max_dev <= 1e-13);
}

TEST_CASE("decomposition rejects unsupported shapes") {
  RootedTree c = build_tree(comb_spec(8));
  CHECK_THROWS_AS(decompose(c, comb_spec(8)), InfiniteBranchingIndex);
  RootedTree w = build_tree(widening_spec(8));
  CHECK_THROWS_AS(decompose(w, widening_spec(8)), InfiniteBranchingIndex);
  TreeGenSpec ex = explicit_spec({{0, 1}, {0, 2}});
  RootedTree e = build_tree(ex);
  CHECK_THROWS_AS(decompose(e, ex), MalformedSpec);
  RootedTree shallow = build_tree(kary_spec(2, 1));
  CHECK_THROWS_AS(decompose(shallow, kary_spec(2, 1)), TruncationTooShallow);
  RootedTree big = build_tree(kary_spec(2, 3000));
  CHECK_THROWS_AS(decompose(big, kary_spec(2, 3000)), TooLarge);
}

TEST_CASE("perturbation entries: row-constant, lower triangular") {
  PerturbationMatrix p = perturbation_entries(2, 6);
  CHECK(p.at(0, 0) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(p.at(4, 2) == doctest::Approx(2.0 / 35.0).epsilon(1e-15));
  for (std::int64_t m = 0; m < 6; ++m)
    for (std::int64_t n = 0; n < 6; ++n) {
      if (n > m)
        CHECK(p.at(m, n) == 0.0);
      else
        CHECK(p.at(m, n) == p.at(m, 0));
    }
}

TEST_CASE("row and column sums match their closed forms") {
  for (std::int64_t k : {2, 3}) {
    CompactnessDiagnostics d = compactness_diagnostics(k, 64, 100000);
    for (std::int64_t m = 0; m < 64; ++m)
      CHECK(std::abs(d.delta[m] -
                     static_cast<double>(k) / static_cast<double>(k + m + 1)) <=
            1e-12);
    CHECK(d.gamma[0] == doctest::Approx(harmonic(k)).epsilon(1e-14));
    // gamma decays like k/n.
    CHECK(d.gamma[63] <= static_cast<double>(k) / 63.0);
    CHECK(d.gamma[63] >= static_cast<double>(k) / 67.0);
    CHECK(!d.verified_columns.empty());
    // Direct summation against closed forms: J = 1e5 leaves a remainder
    // bracket of width ~k/J^2.
    CHECK(d.max_direct_closed_dev <= 1e-8);
  }
  CHECK_THROWS_AS(compactness_diagnostics(-1, 8, 100), MalformedSpec);
  CHECK_THROWS_AS(compactness_diagnostics(2, 0, 100), MalformedSpec);
}
