#include <doctest.h>

#include <json.hpp>

#include "efw/error.hpp"
#include "efw/preorder.hpp"
#include "oracles.hpp"

using namespace efw;

namespace {

std::vector<Mask> subsets_of(Mask u) {
  std::vector<Mask> out;
  for (Mask v = 0; v <= u; ++v) {
    if ((v & ~u) == 0) out.push_back(v);
  }
  return out;
}

SurgeryInstance l6_instance() {
  SurgeryInstance inst;
  inst.base = Preorder::linear(6);
  inst.x0 = 3;
  inst.a = elements_mask({2, 5});
  inst.b = elements_mask({1});
  inst.zip = {{5, 1}};
  return inst;
}

// Checks the three total preorder axioms on the matrix directly.
bool total_preorder(const std::vector<std::vector<bool>>& r) {
  const std::size_t n = r.size();
  for (std::size_t x = 0; x < n; ++x) {
    if (!r[x][x]) return false;
    for (std::size_t y = 0; y < n; ++y) {
      if (!r[x][y] && !r[y][x]) return false;
      for (std::size_t z = 0; z < n; ++z) {
        if (r[x][y] && r[y][z] && !r[x][z]) return false;
      }
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("preorder_lab") {

TEST_CASE("preorder basics") {
  const auto p = Preorder::blocks({2, 2});
  CHECK(p.rank == std::vector<unsigned>{0, 0, 1, 1});
  CHECK(p.classes() == 2);
  CHECK(p.top_class() == elements_mask({2, 3}));
  CHECK(p.strict_segment(3) == elements_mask({0, 1}));
  CHECK(p.initial_segment(0) == elements_mask({0, 1}));
  CHECK(Preorder::from_matrix(p.matrix()) == p);
  CHECK(cofinality(Preorder::linear(5)) == 1);
  CHECK(cofinality(p) == 1);
  CHECK(cofinality(Preorder{}) == 0);
}

TEST_CASE("invalid relations are rejected") {
  CHECK_THROWS_AS(Preorder::from_matrix({{true, false}, {false, true}}), InvalidInput);
  CHECK_THROWS_AS(Preorder::from_matrix({{false}}), InvalidInput);
  CHECK_FALSE(preorder_violations({{true, true, false}, {false, true, true}, {true, false, true}}).empty());
  CHECK(preorder_violations(Preorder::linear(3).matrix()).empty());
}

TEST_CASE("enumeration matches the brute force count") {
  const std::size_t bell[] = {1, 1, 3, 13, 75, 541, 4683};
  for (std::size_t n = 0; n <= 6; ++n) {
    std::vector<std::vector<unsigned>> got;
    unsigned last_classes = 0;
    bool ordered = true;
    enumerate_preorders(n, [&](const Preorder& p) {
      if (p.classes() < last_classes) ordered = false;
      last_classes = p.classes();
      got.push_back(p.rank);
    });
    CHECK(ordered);
    CHECK(got.size() == bell[n]);
    auto want = oracle::all_rank_vectors(n);
    std::sort(got.begin(), got.end());
    std::sort(want.begin(), want.end());
    CHECK(got == want);
  }
}

TEST_CASE("seg_ideal examples") {
  const auto l3 = seg_ideal(Preorder::linear(3), true);
  REQUIRE(l3);
  CHECK(l3->members == subsets_of(elements_mask({0, 1})));
  CHECK_FALSE(seg_ideal(Preorder::linear(3), false));
  const auto two = seg_ideal(Preorder::blocks({2, 2}), true);
  REQUIRE(two);
  CHECK(two->members == subsets_of(elements_mask({0, 1})));
  CHECK_FALSE(seg_ideal(Preorder{}, true));
}

TEST_CASE("property: segment ideals satisfy the ideal axioms") {
  for (std::size_t n = 1; n <= 5; ++n) {
    enumerate_preorders(n, [&](const Preorder& p) {
      const auto f = seg_ideal(p, true);
      REQUIRE(f);
      CHECK(family_violations(*f).empty());
      CHECK(f->join() == (((Mask{1} << n) - 1) & ~p.top_class()));
      CHECK_FALSE(seg_ideal(p, false));
    });
  }
}

TEST_CASE("family checks") {
  CHECK(family_violations(make_family(2, {0, 1, 2})).size() == 1);
  CHECK(family_violations(make_family(2, {0, 1, 2}), false).empty());
  CHECK_FALSE(family_violations(make_family(2, {1})).empty());
  CHECK_FALSE(family_violations(make_family(2, {0, 1, 2, 3})).empty());
  CHECK_THROWS_AS(make_family(2, {4}), InvalidInput);
  CHECK(make_family(3, {2, 0, 2}).members == std::vector<Mask>{0, 2});
}

TEST_CASE("access examples") {
  // all subsets of size < n on ground n
  std::vector<Mask> small;
  for (Mask m = 0; m < 15; ++m) small.push_back(m);
  const auto r = is_access_ideal(make_family(4, small));
  REQUIRE(r.witness);

  const auto none = is_access_ideal(make_family(3, {0}));
  CHECK_FALSE(none.witness);
  CHECK(none.examined == 13);

  const auto sub01 = is_access_ideal(IdealFamily::principal(3, elements_mask({0, 1})));
  REQUIRE(sub01.witness);
  CHECK(sub01.witness->top_class() == elements_mask({2}));

  CHECK_THROWS_AS(is_access_ideal(IdealFamily::principal(7, 1)), BudgetExceeded);
  CHECK_THROWS_AS(is_access_ideal(make_family(2, {1})), InvalidInput);
}

TEST_CASE("minimality examples") {
  const auto m = is_minimal_access(make_family(2, {0, 1}));
  CHECK(m.minimal);
  CHECK(m.access);
  REQUIRE(m.witness);
  CHECK(m.sub_ideals_checked == 1);

  const auto l3 = is_minimal_access(*seg_ideal(Preorder::linear(3), true));
  CHECK(l3.access);
  CHECK_FALSE(l3.minimal);
  REQUIRE(l3.blocking);
  REQUIRE(l3.blocking_witness);
  CHECK(l3.blocking->join() != 0);

  CHECK_THROWS_AS(is_minimal_access(make_family(2, {0, 1, 2, 3})), InvalidInput);
  CHECK_THROWS_AS(is_minimal_access(IdealFamily::principal(6, 1)), BudgetExceeded);
}

TEST_CASE("property: access and minimality on every proper ideal") {
  // A finite ideal is P(U). Its strict segment shadow needs a non-top part
  // inside U, so P(U) is accessible iff U is nonempty, and minimal iff U is
  // a singleton.
  for (std::size_t n = 1; n <= 4; ++n) {
    const Mask ground = (Mask{1} << n) - 1;
    for (Mask u = 0; u < ground; ++u) {
      const auto f = IdealFamily::principal(n, u);
      const auto a = is_access_ideal(f);
      CHECK(a.witness.has_value() == (u != 0));
      const auto m = is_minimal_access(f);
      CHECK(m.access == a.witness.has_value());
      CHECK(m.minimal == (std::popcount(u) == 1));
      if (m.minimal) {
        REQUIRE(m.witness);
        CHECK(seg_ideal(*m.witness, true)->members == f.members);
        for (Mask v : subsets_of(u)) {
          if (v != u) CHECK_FALSE(is_access_ideal(IdealFamily::principal(n, v)).witness);
        }
      }
      if (a.witness) {
        const auto seg = seg_ideal(*a.witness, true);
        for (Mask s : seg->members) CHECK(f.contains(s));
      }
    }
  }
}

TEST_CASE("surgery on the L6 instance") {
  const auto inst = l6_instance();
  CHECK(surgery_violations(inst).empty());
  const auto p1 = surgery(inst);
  CHECK(p1.leq(1, 5));
  CHECK(p1.leq(5, 1));
  CHECK(total_preorder(p1.matrix()));
  const auto claims = verify_surgery_claims(inst, p1);
  REQUIRE(claims.size() == 3);
  for (const auto& c : claims) CHECK(c.holds);
  CHECK(claims[1].name == "b_not_in_seg_p1");
}

TEST_CASE("surgery rejections and the identity case") {
  SurgeryInstance bad = l6_instance();
  bad.a = elements_mask({1, 2});
  bad.b = 0;
  bad.zip.clear();
  CHECK_FALSE(surgery_violations(bad).empty());
  CHECK_THROWS_AS(surgery(bad), InvalidInput);

  SurgeryInstance outside = l6_instance();
  outside.b = elements_mask({4});
  outside.zip = {{5, 4}};
  CHECK_FALSE(surgery_violations(outside).empty());

  SurgeryInstance id;
  id.base = Preorder::blocks({1, 2, 1});
  id.x0 = 3;
  id.a = elements_mask({3});
  CHECK(surgery_violations(id).empty());
  CHECK(surgery(id) == id.base);
}

TEST_CASE("property: random surgery instances") {
  for (std::uint64_t seed = 0; seed < 300; ++seed) {
    const auto inst = random_surgery_instance(seed, 8);
    CAPTURE(surgery_to_json(inst));
    REQUIRE(surgery_violations(inst).empty());
    CHECK(inst.b != 0);
    const auto p1 = surgery(inst);
    CHECK(total_preorder(p1.matrix()));
    for (const auto& [y, z] : inst.zip) CHECK(p1.rank[y] == p1.rank[z]);
    // b meets the top class, so no strict segment contains it.
    const auto seg = seg_ideal(p1, true);
    if (seg) CHECK_FALSE(seg->contains(inst.b));
    const auto claims = verify_surgery_claims(inst, p1);
    CHECK(claims[1].holds);
  }
  CHECK(surgery_to_json(random_surgery_instance(5, 8)) == surgery_to_json(random_surgery_instance(5, 8)));
}

TEST_CASE("json round trips") {
  const auto p = Preorder::blocks({1, 3});
  CHECK(preorder_from_json(preorder_to_json(p)) == p);
  CHECK(preorder_from_json(R"({"size":2,"rel":[[1,1],[0,1]]})") == Preorder::linear(2));
  CHECK_THROWS_AS(preorder_from_json(R"({"size":2,"rel":[[1,0],[0,1]]})"), InvalidInput);
  CHECK_THROWS_AS(preorder_from_json("{"), InvalidInput);

  const auto f = IdealFamily::principal(3, 3);
  CHECK(family_from_json(family_to_json(f)) == f);
  CHECK_THROWS_AS(family_from_json(R"({"ground":2,"members":[[2]]})"), InvalidInput);

  const auto inst = l6_instance();
  const auto back = surgery_from_json(surgery_to_json(inst));
  CHECK(back.base == inst.base);
  CHECK(back.a == inst.a);
  CHECK(back.zip == inst.zip);

  const auto j = nlohmann::json::parse(claims_to_json(verify_surgery_claims(inst, surgery(inst))));
  REQUIRE(j.size() == 3);
  CHECK(j[1]["assertion"] == "b_not_in_seg_p1");
  CHECK(j[1]["holds"] == true);
}

}  // TEST_SUITE
