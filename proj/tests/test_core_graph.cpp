#include <doctest.h>

#include <algorithm>

#include "support/fixtures.hpp"

using namespace rdsnet;
using fixtures::chain;

namespace {

AdjacencyMatrix with_edge(AdjacencyMatrix a, std::size_t i, std::size_t j) {
  a.set_edge(i, j, true);
  return a;
}

}  // namespace

TEST_CASE("adjacency matrix stays symmetric with a zero diagonal") {
  AdjacencyMatrix a(4);
  a.set_edge(0, 2, true);
  a.set_edge(3, 1, true);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK_FALSE(a.has_edge(i, i));
    for (std::size_t j = 0; j < 4; ++j) CHECK(a.has_edge(i, j) == a.has_edge(j, i));
  }
  CHECK(a.edge_count() == 2);
  CHECK(a.degree(1) == 1);
  CHECK_THROWS_AS(a.set_edge(2, 2, true), std::invalid_argument);
  a.set_edge(0, 2, false);
  CHECK(a.edge_count() == 1);
  CHECK(a.degree(0) == 0);
}

TEST_CASE("apply rejects a move that does not match the matrix") {
  AdjacencyMatrix a(3);
  CHECK_THROWS_AS(a.apply({VertexPair(0, 1), MoveKind::remove}), std::logic_error);
  a.apply({VertexPair(1, 0), MoveKind::add});
  CHECK(a.has_edge(0, 1));
  CHECK_THROWS_AS(a.apply({VertexPair(0, 1), MoveKind::add}), std::logic_error);
  CHECK(inverse(ToggleMove{VertexPair(0, 1), MoveKind::add}).kind == MoveKind::remove);
}

TEST_CASE("undirected projection of a chain, a lone seed and a star") {
  const auto c = chain({1, 2, 1});
  const auto ar = undirected_projection(c.recruitment_graph());
  CHECK(ar.edges() == std::vector<VertexPair>{{0, 1}, {1, 2}});

  const auto lone = fixtures::study(1, {}, {0}, {0}, {0.0});
  const auto single = undirected_projection(lone.recruitment_graph());
  CHECK(single.size() == 1);
  CHECK(single.edge_count() == 0);

  const auto star = fixtures::study(4, {{0, 1}, {0, 2}, {0, 3}}, {0}, {3, 1, 1, 1}, {0, 1, 2, 3});
  const auto sp = undirected_projection(star.recruitment_graph());
  CHECK(sp.edge_count() == 3);
  CHECK(sp.degree(0) == 3);
  for (std::size_t v = 1; v < 4; ++v) CHECK(sp.degree(v) == 1);
}

TEST_CASE("recruitment graph validation names the offending field") {
  CHECK_THROWS_AS(RecruitmentGraph::create(3, {{0, 1}, {2, 1}}, {0, 2}), ValidationError);  // two recruiters
  CHECK_THROWS_AS(RecruitmentGraph::create(3, {{1, 0}, {1, 2}}, {1}), ValidationError);      // recruiter later
  CHECK_THROWS_AS(RecruitmentGraph::create(2, {{0, 1}}, {0, 1}), ValidationError);           // recruited seed
  CHECK_THROWS_AS(RecruitmentGraph::create(3, {{0, 1}}, {0}), ValidationError);              // orphan non-seed
  CHECK_THROWS_AS(RecruitmentGraph::create(2, {{0, 0}}, {0}), ValidationError);              // self-recruitment
  CHECK_THROWS_AS(RecruitmentGraph::create(2, {{0, 5}}, {0}), ValidationError);              // out of range
  CHECK_NOTHROW(RecruitmentGraph::create(3, {{0, 2}}, {0, 1}));
}

TEST_CASE("observed study validation") {
  auto g = RecruitmentGraph::create(3, {{0, 1}, {1, 2}}, {0});
  auto c = derive_coupons(g, 2);
  SUBCASE("strictly increasing times") {
    try {
      ObservedStudy::create(g, {1, 2, 1}, {0.0, 1.0, 1.0}, c);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "times");
    }
  }
  SUBCASE("degree below the recruitment degree is infeasible") {
    try {
      ObservedStudy::create(g, {1, 1, 1}, {0.0, 1.0, 2.0}, c);
      FAIL("expected a validation error");
    } catch (const ValidationError& e) {
      CHECK(e.field() == "degrees");
    }
  }
  SUBCASE("coupon held before entry") {
    auto bad = c;
    bad(2, 1) = 1;
    CHECK_THROWS_AS(ObservedStudy::create(g, {1, 2, 1}, {0.0, 1.0, 2.0}, bad), ValidationError);
  }
  SUBCASE("recruiter without a coupon") {
    auto bad = c;
    bad(0, 1) = 0;
    CHECK_THROWS_AS(ObservedStudy::create(g, {1, 2, 1}, {0.0, 1.0, 2.0}, bad), ValidationError);
  }
  SUBCASE("valid study keeps its inputs") {
    const auto s = ObservedStudy::create(g, {1, 2, 1}, {0.0, 1.0, 2.0}, c);
    CHECK(s.size() == 3);
    CHECK(s.original_ids() == std::vector<std::int64_t>{1, 2, 3});
    CHECK(s.is_seed(0));
    CHECK_FALSE(s.is_seed(2));
  }
}

TEST_CASE("derived coupons track the allowance and event order") {
  // Seed 0 with 2 coupons recruits 1 and 2; 1 recruits 3.
  auto g = RecruitmentGraph::create(4, {{0, 1}, {0, 2}, {1, 3}}, {0});
  const auto c = derive_coupons(g, 2);
  CHECK(c(0, 1) == 1);
  CHECK(c(0, 2) == 1);
  CHECK(c(0, 3) == 0);  // both coupons spent
  CHECK(c(1, 2) == 1);
  CHECK(c(1, 3) == 1);
  CHECK(c(2, 3) == 1);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j <= i; ++j) CHECK(c(i, j) == 0);
}

TEST_CASE("check_compatible examples") {
  SUBCASE("A_R with degrees equal to its row sums") {
    const auto s = chain({1, 2, 1});
    const auto r = check_compatible(s.recruitment_adjacency(), s);
    CHECK(r.is_compatible);
    CHECK(r.violated_degree_vertices.empty());
    CHECK(r.violated_subgraph_pairs.empty());
  }
  SUBCASE("adding {1,3} to the chain with d=(1,2,1) overflows both endpoints") {
    const auto s = chain({1, 2, 1});
    const auto r = check_compatible(with_edge(s.recruitment_adjacency(), 0, 2), s);
    CHECK_FALSE(r.is_compatible);
    CHECK(r.violated_degree_vertices == std::vector<std::size_t>{0, 2});
    CHECK(r.violated_subgraph_pairs.empty());
  }
  SUBCASE("missing recruitment edge {1,2}") {
    const auto s = chain({1, 2, 1});
    AdjacencyMatrix a(3);
    a.set_edge(1, 2, true);
    const auto r = check_compatible(a, s);
    CHECK_FALSE(r.is_compatible);
    CHECK(r.violated_subgraph_pairs == std::vector<VertexPair>{{0, 1}});
    CHECK(r.violated_degree_vertices.empty());
  }
  SUBCASE("dimension mismatch") {
    const auto s = chain({1, 2, 1});
    CHECK_THROWS_AS(check_compatible(AdjacencyMatrix(4), s), std::invalid_argument);
  }
}

TEST_CASE("compatibility report agrees with the definition on random matrices") {
  Rng rng = make_stream(11, 0);
  for (int rep = 0; rep < 200; ++rep) {
    const auto s = fixtures::random_study(rng, {.n = 7});
    AdjacencyMatrix a(7);
    for (std::size_t i = 0; i < 7; ++i)
      for (std::size_t j = i + 1; j < 7; ++j)
        if (uniform_open(rng) < 0.3) a.set_edge(i, j, true);
    const auto r = check_compatible(a, s);
    CHECK(r.is_compatible == fixtures::brute_compatible(a, s));
    CHECK(r.is_compatible == (r.violated_degree_vertices.empty() && r.violated_subgraph_pairs.empty()));
  }
}

TEST_CASE("count_addable examples") {
  const auto s = chain({2, 2, 2});
  CHECK(count_addable(s.recruitment_adjacency(), s) == 1);
  CHECK(count_addable(with_edge(s.recruitment_adjacency(), 0, 2), s) == 0);

  const std::size_t n = 6;
  std::vector<std::size_t> seeds(n);
  for (std::size_t i = 0; i < n; ++i) seeds[i] = i;
  const auto all_seeds = fixtures::study(n, {}, seeds, std::vector<int>(n, static_cast<int>(n - 1)),
                                         {0, 1, 2, 3, 4, 5});
  CHECK(count_addable(AdjacencyMatrix(n), all_seeds) == n * (n - 1) / 2);
}

TEST_CASE("count_removable examples") {
  const auto s = chain({2, 2, 2});
  CHECK(count_removable(s.recruitment_adjacency(), s) == 0);
  CHECK(count_removable(with_edge(s.recruitment_adjacency(), 0, 2), s) == 1);

  Rng rng = make_stream(12, 0);
  for (int rep = 0; rep < 50; ++rep) {
    const auto rs = fixtures::random_study(rng, {.n = 9});
    const auto a = fixtures::random_compatible(rs, rng);
    const std::size_t extra = a.edge_count() - rs.recruitment_adjacency().edge_count();
    CHECK(count_removable(a, rs) == extra);
    CHECK(count_addable(a, rs) == fixtures::brute_addable(a, rs));
  }
}

TEST_CASE("is_valid_move follows the add and remove guards") {
  const auto s = chain({2, 2, 2});
  const auto& ar = s.recruitment_adjacency();
  CHECK(is_valid_move(ar, s, {VertexPair(0, 2), MoveKind::add}));
  CHECK_FALSE(is_valid_move(ar, s, {VertexPair(0, 1), MoveKind::remove}));  // recruitment edge
  CHECK_FALSE(is_valid_move(ar, s, {VertexPair(0, 1), MoveKind::add}));     // already present
  const auto full = with_edge(ar, 0, 2);
  CHECK(is_valid_move(full, s, {VertexPair(0, 2), MoveKind::remove}));
}

TEST_CASE("compatible_path examples") {
  const auto s = chain({2, 2, 2});
  const auto& ar = s.recruitment_adjacency();
  CHECK(compatible_path(ar, ar, s).empty());
  const auto moves = compatible_path(with_edge(ar, 0, 2), ar, s);
  REQUIRE(moves.size() == 1);
  CHECK(moves[0] == ToggleMove{VertexPair(0, 2), MoveKind::remove});
}

TEST_CASE("compatible_path visits only compatible matrices and ends at the target") {
  Rng rng = make_stream(13, 0);
  for (int rep = 0; rep < 100; ++rep) {
    const auto s = fixtures::random_study(rng, {.n = 10});
    const auto a1 = fixtures::random_compatible(s, rng);
    const auto a2 = fixtures::random_compatible(s, rng);
    auto current = a1;
    bool seen_add = false;
    for (const auto& m : compatible_path(a1, a2, s)) {
      if (m.kind == MoveKind::add) seen_add = true;
      CHECK_FALSE((seen_add && m.kind == MoveKind::remove));
      current.apply(m);
      CHECK(check_compatible(current, s).is_compatible);
    }
    CHECK(current == a2);
  }
}

TEST_CASE("the recruitment projection lies under every compatible matrix") {
  Rng rng = make_stream(14, 0);
  for (int rep = 0; rep < 30; ++rep) {
    const auto s = fixtures::random_study(rng, {.n = 5, .max_extra_degree = 2});
    for (const auto& a : fixtures::enumerate_compatible(s)) {
      CHECK(s.recruitment_adjacency().is_subgraph_of(a));
      const std::size_t total = count_addable(a, s) + count_removable(a, s);
      // A frozen state only happens when the space is a single point.
      if (total == 0) CHECK(fixtures::enumerate_compatible(s).size() == 1);
    }
  }
}
