#include <doctest.h>

#include <json.hpp>

#include "efw/ef_engine.hpp"
#include "efw/error.hpp"
#include "efw/ordinal.hpp"
#include "efw/structure.hpp"

using namespace efw;

namespace {

FiniteStructure pow2_with_singletons() {
  // Universe indexes subsets of {0,1} by bitmask; the ideal {0, {0}, {1}}
  // is not join closed, so the loader is told not to check it.
  return structure_from_json(
      R"({"universe":4,"relations":{"sub":[[0,0],[0,1],[0,2],[0,3],[1,1],[1,3],[2,2],[2,3],[3,3]]},)"
      R"("ideal":[[],[0],[1]]})",
      false);
}

// Does there exist a strictly order-preserving map pairing; used as a slow
// but obvious check of is_partial_embedding on linear orders.
bool order_pairing(const Pairing& pairs) {
  for (const auto& [a, b] : pairs) {
    for (const auto& [c, d] : pairs) {
      if ((a < c) != (b < d) || (a == c) != (b == d)) return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("ef_engine") {

TEST_CASE("structure builders") {
  const auto l3 = linear_order(3);
  CHECK(l3.universe_size() == 3);
  const auto lt = *l3.find_relation("lt");
  CHECK(l3.holds(lt, {0, 2}));
  CHECK_FALSE(l3.holds(lt, {2, 0}));
  CHECK_FALSE(l3.holds(lt, {1, 1}));

  const auto p = powerset_algebra(3, 2);
  CHECK(p.universe_size() == 8);
  const auto s = *p.find_relation("S");
  CHECK(p.holds(s, {1}));
  CHECK_FALSE(p.holds(s, {3}));
  CHECK(p.holds(*p.find_relation("sub"), {1, 3}));

  const auto two = two_sorted(2, 1);
  CHECK(two.universe_size() == 2 + 4);
  CHECK(two.holds(*two.find_relation("in"), {1, 2 + 2}));
  CHECK_FALSE(two.holds(*two.find_relation("in"), {0, 2 + 2}));
}

TEST_CASE("structure json round trip and errors") {
  const auto s = powerset_algebra(2, 1);
  const auto back = structure_from_json(structure_to_json(s));
  CHECK(back.universe_size() == s.universe_size());
  CHECK(back.same_signature(s));
  CHECK(is_partial_embedding(s, back, {{0, 0}, {1, 1}, {2, 2}, {3, 3}}));

  CHECK_THROWS_AS(structure_from_json(R"({"universe":2,"relations":{"lt":[[0,2]]}})"), InvalidInput);
  CHECK_THROWS_AS(structure_from_json(R"({"universe":3,"relations":{},"ideal":[[]]})"), InvalidInput);
  CHECK_THROWS_AS(structure_from_json(R"({"universe":4,"relations":{},"ideal":[[],[0],[1]]})"), InvalidInput);
  CHECK_THROWS_AS(load_structure("lin:x"), Error);
  CHECK(load_structure("lin:4").universe_size() == 4);
  CHECK(load_structure("pow:2:1").universe_size() == 4);
}

TEST_CASE("is_partial_embedding examples") {
  const auto l3 = linear_order(3);
  CHECK(is_partial_embedding(l3, l3, {{0, 0}, {2, 2}}));
  CHECK_FALSE(is_partial_embedding(l3, l3, {{0, 1}, {1, 0}}));
  const auto p = pow2_with_singletons();
  CHECK_FALSE(is_partial_embedding(p, p, {{1, 3}}));
  CHECK(is_partial_embedding(p, p, {{1, 2}}));
  CHECK_FALSE(is_partial_embedding(l3, l3, {{0, 0}, {0, 1}}));
  CHECK_FALSE(is_partial_embedding(l3, l3, {{5, 0}}));
}

TEST_CASE("is_partial_embedding agrees with order comparison on linear orders") {
  const auto l4 = linear_order(4);
  for (std::size_t a = 0; a < 4; ++a) {
    for (std::size_t b = 0; b < 4; ++b) {
      for (std::size_t c = 0; c < 4; ++c) {
        for (std::size_t d = 0; d < 4; ++d) {
          const Pairing pairs{{a, b}, {c, d}};
          CHECK(is_partial_embedding(l4, l4, pairs) == order_pairing(pairs));
        }
      }
    }
  }
}

TEST_CASE("who_wins examples") {
  const auto l3 = linear_order(3), l4 = linear_order(4);
  CHECK(who_wins(l3, l4, 2).duplicator_wins);
  const auto r = who_wins(l3, l4, 3);
  CHECK_FALSE(r.duplicator_wins);
  REQUIRE(r.witness);
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::size_t k = 1; k <= 4; ++k) CHECK(who_wins(linear_order(k), linear_order(k), n).duplicator_wins);
  }
  CHECK_THROWS_AS(who_wins(l3, powerset_algebra(2, 1), 1), SignatureMismatch);
}

TEST_CASE("ef_rank_distinguishing examples") {
  CHECK(ef_rank_distinguishing(linear_order(3), linear_order(4), 5) == std::optional<std::size_t>(3));
  CHECK_FALSE(ef_rank_distinguishing(linear_order(2), linear_order(2), 5));
  // One round cannot separate L1 from L2: every single element looks alike.
  CHECK(ef_rank_distinguishing(linear_order(1), linear_order(2), 5) == std::optional<std::size_t>(2));
  CHECK(ef_rank_distinguishing(linear_order(0), linear_order(1), 5) == std::optional<std::size_t>(1));
}

TEST_CASE("budget is enforced") {
  CHECK_THROWS_AS(who_wins(linear_order(12), linear_order(13), 4, 50), BudgetExceeded);
}

TEST_CASE("large truncations are not separated at low rank") {
  // Finite prefixes of w^w and w^w*2 are long orders; at rank 3 only
  // lengths below 7 are visible.
  CHECK(who_wins(linear_order(9), linear_order(12), 3).duplicator_wins);
  CHECK(elementarily_equivalent(parse_ordinal("w^w"), parse_ordinal("w^w*2")));
}

TEST_CASE("property: symmetry, monotonicity and determinism") {
  for (std::size_t a = 1; a <= 4; ++a) {
    for (std::size_t b = 1; b <= 4; ++b) {
      const auto m = linear_order(a), n = linear_order(b);
      bool previous = true;
      for (std::size_t r = 0; r <= 3; ++r) {
        const auto x = who_wins(m, n, r), y = who_wins(n, m, r), z = who_wins(m, n, r);
        CHECK(x.duplicator_wins == y.duplicator_wins);
        CHECK(x.witness == z.witness);
        CHECK(x.nodes == z.nodes);
        if (!previous) CHECK_FALSE(x.duplicator_wins);
        previous = x.duplicator_wins;
      }
    }
  }
  for (unsigned t1 = 1; t1 <= 2; ++t1) {
    for (unsigned t2 = 1; t2 <= 2; ++t2) {
      const auto m = powerset_algebra(2, t1), n = powerset_algebra(2, t2);
      for (std::size_t r = 0; r <= 2; ++r) {
        CHECK(who_wins(m, n, r).duplicator_wins == who_wins(n, m, r).duplicator_wins);
      }
    }
  }
}

TEST_CASE("classical criterion for linear orders") {
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::size_t k = 1; k <= 8; ++k) {
      for (std::size_t n = 1; n <= 3; ++n) {
        const std::size_t bound = (std::size_t{1} << n) - 1;
        CAPTURE(m);
        CAPTURE(k);
        CAPTURE(n);
        CHECK(who_wins(linear_order(m), linear_order(k), n).duplicator_wins == (m == k || std::min(m, k) >= bound));
      }
    }
  }
}

TEST_CASE("step_game examples") {
  const auto l3 = linear_order(3), l4 = linear_order(4);
  Play play;
  play.total_rounds = 3;
  play = step_game(l3, l4, play, {Side::N, 2});
  CHECK(play.pending);
  CHECK(play.pairs.empty());
  CHECK_THROWS_AS(step_game(l3, l4, play, {Side::N, 1}), IllegalMove);
  CHECK_THROWS_AS(step_game(l3, l4, play, {Side::M, 7}), IllegalMove);

  Play same;
  same.total_rounds = 3;
  const auto l3b = linear_order(3);
  for (std::size_t e : {1, 0, 2}) {
    same = step_game(l3, l3b, same, {Side::M, e});
    same = step_game(l3, l3b, same, duplicator_reply(l3, l3b, same));
    CHECK(is_partial_embedding(l3, l3b, same.pairs));
  }
  CHECK(same.finished());
  CHECK_THROWS_AS(step_game(l3, l3b, same, {Side::M, 0}), IllegalMove);
  REQUIRE(same.transcript.size() == 6);
  const auto first = nlohmann::json::parse(same.transcript[0]);
  CHECK(first["round"] == 1);
  CHECK(first["side"] == "M");
  CHECK(first["player"] == "I");
  CHECK(first["element"] == 1);
  CHECK(nlohmann::json::parse(same.transcript[1])["player"] == "II");
}

TEST_CASE("duplicator keeps a winning position when one exists") {
  const auto l7 = linear_order(7), l8 = linear_order(8);
  for (std::size_t e = 0; e < 8; ++e) {
    Play play;
    play.total_rounds = 3;
    play = step_game(l7, l8, play, {Side::N, e});
    play = step_game(l7, l8, play, duplicator_reply(l7, l8, play));
    CHECK(who_wins(l7, l8, 2, kDefaultNodeBudget, play.pairs).duplicator_wins);
  }
}

}  // TEST_SUITE
