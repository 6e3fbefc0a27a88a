// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <bit>
#include <chrono>
#include <cstdlib>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "efw/ef_engine.hpp"
#include "efw/formula.hpp"
#include "efw/formula_eval.hpp"
#include "efw/ordinal.hpp"
#include "efw/preorder.hpp"
#include "efw/sized_boolean.hpp"
#include "efw/structure.hpp"
#include "oracles.hpp"

using namespace efw;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

// Records the first few failures and counts the rest.
class Failures {
 public:
  void add(const std::string& what) {
    if (count_++ < 5) first_ += (first_.empty() ? "" : "; ") + what;
  }
  bool none() const { return count_ == 0; }
  Outcome outcome(const std::string& summary) const {
    if (none()) return {true, summary};
    return {false, std::to_string(count_) + " failure(s): " + first_};
  }

 private:
  std::size_t count_ = 0;
  std::string first_;
};

bool run_criterion(int id, const char* title, double limit_s, const std::function<Outcome()>& body) {
  const auto start = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  const bool in_time = secs < limit_s;
  const bool pass = o.ok && in_time;
  char timing[64];
  std::snprintf(timing, sizeof timing, "%.2fs / %.0fs", secs, limit_s);
  std::cout << "criterion " << id << ": " << (pass ? "PASS" : "FAIL") << "  " << title << "  [" << timing << "]  "
            << o.detail << (in_time ? "" : " (over time limit)") << std::endl;
  return pass;
}

// 1 -------------------------------------------------------------------------

Outcome naturals() {
  constexpr std::uint64_t N = 10000;
  std::vector<Ordinal> nat;
  nat.reserve(N);
  for (std::uint64_t i = 0; i < N; ++i) nat.push_back(Ordinal::natural(i));
  Failures f;
  for (std::uint64_t a = 0; a < N; ++a) {
    for (std::uint64_t b = 0; b < N; ++b) {
      if (add(nat[a], nat[b]).as_natural() != a + b) f.add("add " + std::to_string(a) + "," + std::to_string(b));
      if (mul(nat[a], nat[b]).as_natural() != a * b) f.add("mul " + std::to_string(a) + "," + std::to_string(b));
      const auto c = compare(nat[a], nat[b]);
      if (c != (a <=> b)) f.add("cmp " + std::to_string(a) + "," + std::to_string(b));
    }
  }
  return f.outcome("1e8 pairs, add/mul/compare agree with integers");
}

// 2 -------------------------------------------------------------------------

Outcome congruence() {
  // Exponents 0, 1, 2, w, w+1, w*2 with coefficients 0..3.
  const std::vector<Ordinal> exps{Ordinal::natural(2), Ordinal::natural(1), Ordinal::natural(0)};
  const std::vector<Ordinal> inf_exps{parse_ordinal("w*2"), parse_ordinal("w+1"), Ordinal::omega()};
  struct Value {
    Ordinal o;
    std::array<unsigned, 3> fin{};  // coefficients of w^2, w, 1
    bool infinite = false;
  };
  std::vector<Value> values;
  for (unsigned code = 0; code < 4096; ++code) {
    Value v;
    Terms terms;
    for (unsigned i = 0; i < 3; ++i) {
      const unsigned c = (code >> (2 * i)) & 3;
      if (c) terms.push_back({inf_exps[i], c});
      v.infinite = v.infinite || c;
    }
    for (unsigned i = 0; i < 3; ++i) {
      const unsigned c = (code >> (6 + 2 * i)) & 3;
      if (c) terms.push_back({exps[i], c});
      v.fin[i] = c;
    }
    v.o = Ordinal::from_terms(terms);
    values.push_back(std::move(v));
  }
  Failures f;
  std::size_t pairs = 0;
  for (const auto& a : values) {
    for (const auto& b : values) {
      ++pairs;
      // Same finite tail and same zero/nonzero status of the w^w part.
      const bool want = a.fin == b.fin && a.infinite == b.infinite;
      const auto w = congruent_mod_omega_omega(a.o, b.o);
      if (w.has_value() != want) f.add(a.o.to_string() + " ~ " + b.o.to_string());
      if (!a.infinite && !b.infinite && w.has_value() != (a.o == b.o)) f.add("below w^w: " + a.o.to_string());
    }
  }
  // Transitivity on random triples, directly.
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200000; ++i) {
    const auto& a = values[rng() % values.size()].o;
    const auto& b = values[rng() % values.size()].o;
    const auto& c = values[rng() % values.size()].o;
    if (congruent_mod_omega_omega(a, b) && congruent_mod_omega_omega(b, c) && !congruent_mod_omega_omega(a, c)) {
      f.add("transitivity " + a.to_string());
    }
  }
  for (std::uint32_t i = 1; i <= 3; ++i) {
    if (!congruent_mod_omega_omega(Ordinal::cardinal(i), Ordinal::on())) f.add("Card/On");
    for (std::uint32_t j = 1; j <= 3; ++j) {
      if (!congruent_mod_omega_omega(Ordinal::cardinal(i), Ordinal::cardinal(j))) f.add("Card/Card");
    }
  }
  return f.outcome(std::to_string(values.size()) + " values, " + std::to_string(pairs) +
                   " pairs; classes match the remainder oracle; symbolic pairs accepted");
}

// 3 -------------------------------------------------------------------------

Outcome fraisse() {
  EnumerationConfig c;
  c.lang = Language::Lord;
  c.max_rank = 3;
  c.max_size = 9;
  c.use_or = false;
  c.use_implies = false;
  c.use_forall = false;
  std::vector<Evaluator> models;
  for (std::size_t n = 1; n <= 4; ++n) models.emplace_back(make_model(linear_order(n), Language::Lord));
  // separated[r][a][b]: some sentence of rank exactly r tells L_{a+1} from L_{b+1}.
  bool separated[4][4][4] = {};
  const auto count = enumerate_formulas(c, [&](const Formula& f) {
    const std::size_t r = quantifier_rank(f);
    bool v[4];
    for (std::size_t i = 0; i < 4; ++i) v[i] = models[i].eval(f);
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) separated[r][a][b] = separated[r][a][b] || v[a] != v[b];
    }
  });
  Failures fails;
  for (std::size_t n = 0; n <= 3; ++n) {
    for (std::size_t a = 0; a < 4; ++a) {
      for (std::size_t b = 0; b < 4; ++b) {
        bool agree = true;
        for (std::size_t r = 0; r <= n; ++r) agree = agree && !separated[r][a][b];
        const bool dup = who_wins(linear_order(a + 1), linear_order(b + 1), n).duplicator_wins;
        if (dup != agree) {
          fails.add("L" + std::to_string(a + 1) + " vs L" + std::to_string(b + 1) + " n=" + std::to_string(n));
        }
      }
    }
  }
  // Classical criterion, recorded as regression values.
  for (std::size_t m = 1; m <= 8; ++m) {
    for (std::size_t k = 1; k <= 8; ++k) {
      for (std::size_t n = 0; n <= 3; ++n) {
        const bool want = m == k || std::min(m, k) >= (std::size_t{1} << n) - 1;
        if (who_wins(linear_order(m), linear_order(k), n).duplicator_wins != want) {
          fails.add("classical L" + std::to_string(m) + " vs L" + std::to_string(k) + " n=" + std::to_string(n));
        }
      }
    }
  }
  return fails.outcome(std::to_string(count) + " sentences; games match theories on L1..L4; classical criterion holds for m,k <= 8");
}

// 4 -------------------------------------------------------------------------

const AlgebraSpec kDefaultSpec{"P(kappa)", true};

Outcome strategy() {
  Failures f;
  std::size_t states = 0;
  for (std::uint64_t seed = 0; seed < 500; ++seed) {
    RunConfig c;
    c.left = kDefaultSpec;
    c.right = kDefaultSpec;
    c.rounds = 25;
    c.seed = seed;
    const auto run = run_adversarial(c);
    if (run.breakdown) f.add("seed " + std::to_string(seed) + " breakdown: " + *run.breakdown);
    for (const auto& r : run.records) {
      ++states;
      if (!verify_state(r.state)) f.add("seed " + std::to_string(seed) + " round " + std::to_string(r.state.round));
    }
  }
  return f.outcome("500 games x 25 rounds, " + std::to_string(states) + " states verified, no breakdowns");
}

// 5 -------------------------------------------------------------------------

Outcome concretization() {
  Failures f;
  std::size_t checked = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    RunConfig c;
    c.left = kDefaultSpec;
    c.right = kDefaultSpec;
    c.adversary = Adversary::FiniteRandom;
    c.rounds = 6;
    c.seed = seed;
    const auto run = run_adversarial(c);
    if (run.breakdown) f.add("seed " + std::to_string(seed) + " breakdown");
    for (const auto& r : run.records) {
      const auto cz = concretize(r.state);
      ++checked;
      if (!is_partial_embedding(cz.left, cz.right, cz.pairs)) {
        f.add("seed " + std::to_string(seed) + " round " + std::to_string(r.state.round));
      }
    }
  }
  return f.outcome(std::to_string(checked) + " concretized states are partial embeddings");
}

// 6 -------------------------------------------------------------------------

Outcome translation() {
  Failures f;
  std::vector<std::pair<Evaluator, Evaluator>> pairs;  // (two-sorted, algebra)
  std::vector<std::string> names;
  for (unsigned n = 1; n <= 3; ++n) {
    for (unsigned t = 1; t <= 3; ++t) {
      pairs.emplace_back(Evaluator(make_model(two_sorted(n, t), Language::L1S)),
                         Evaluator(make_model(powerset_algebra(n, t), Language::LbS)));
      names.push_back("n=" + std::to_string(n) + ",t=" + std::to_string(t));
    }
  }
  EnumerationConfig c;
  c.max_rank = 7;
  c.max_size = 7;
  c.lang = Language::L1S;
  const auto plus = enumerate_formulas(c, [&](const Formula& phi) {
    const Formula g = translate_plus(phi);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].first.eval(phi) != pairs[i].second.eval(g)) f.add(to_string(phi) + " on " + names[i]);
    }
  });
  c.lang = Language::LbS;
  const auto prime = enumerate_formulas(c, [&](const Formula& psi) {
    const Formula g = translate_prime(psi);
    for (std::size_t i = 0; i < pairs.size(); ++i) {
      if (pairs[i].second.eval(psi) != pairs[i].first.eval(g)) f.add("prime " + to_string(psi) + " on " + names[i]);
    }
  });
  return f.outcome(std::to_string(plus) + " L1S and " + std::to_string(prime) +
                   " LbS sentences on 9 structure pairs, no mismatch");
}

// 7 -------------------------------------------------------------------------

Outcome positivity() {
  EnumerationConfig c;
  c.lang = Language::Lmon;
  c.max_rank = 3;
  c.max_size = 8;
  c.scope = {{"X", Sort::Set}};
  std::vector<Formula> positive;
  Failures f;
  std::size_t rejected = 0, negative = 0;
  enumerate_formulas(c, [&](const Formula& phi) {
    const bool pos = is_positive(phi);
    if (oracle::has_negative_in(phi)) {
      ++negative;
      if (pos) f.add("accepted negative " + to_string(phi));
    }
    if (!pos) {
      ++rejected;
      if (!oracle::has_guarded_in(phi)) f.add("rejected without a guarded atom " + to_string(phi));
      return;
    }
    if (positive.size() < 1000 && oracle::in_occurrences(phi).size() > 0) positive.push_back(phi);
  });
  if (positive.size() < 1000) f.add("only " + std::to_string(positive.size()) + " positive formulas");
  std::size_t checks = 0;
  for (std::size_t n = 1; n <= 4; ++n) {
    Evaluator ev(make_model(linear_order(n), Language::Lmon));
    const std::uint64_t all = std::uint64_t{1} << n;
    for (const auto& phi : positive) {
      std::vector<bool> value(all);
      for (std::uint64_t x = 0; x < all; ++x) value[x] = ev.eval(phi, {{"X", x}});
      for (std::uint64_t x = 0; x < all; ++x) {
        if (!value[x]) continue;
        for (std::uint64_t y = 0; y < all; ++y) {
          if ((x & ~y) != 0) continue;
          ++checks;
          if (!value[y]) f.add(to_string(phi) + " on L" + std::to_string(n));
        }
      }
    }
  }
  return f.outcome(std::to_string(positive.size()) + " positive formulas, " + std::to_string(checks) +
                   " monotone pairs; " + std::to_string(rejected) + " rejections (" + std::to_string(negative) +
                   " negative) confirmed by the polarity oracle");
}

// 8 -------------------------------------------------------------------------

Outcome surgery_runs() {
  Failures f;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto inst = random_surgery_instance(seed, 8);
    const auto p1 = surgery(inst);
    const auto m = p1.matrix();
    const std::size_t n = m.size();
    bool total = true;
    for (std::size_t x = 0; x < n; ++x) {
      total = total && m[x][x];
      for (std::size_t y = 0; y < n; ++y) {
        total = total && (m[x][y] || m[y][x]);
        for (std::size_t z = 0; z < n; ++z) total = total && (!(m[x][y] && m[y][z]) || m[x][z]);
      }
    }
    if (!total) f.add("seed " + std::to_string(seed) + " not a total preorder");
    const auto claims = verify_surgery_claims(inst, p1);
    if (claims.size() < 2 || !claims[1].holds) f.add("seed " + std::to_string(seed) + " claim 2");
    // b is cofinal: it meets the top class of the result.
    if ((inst.b & p1.top_class()) == 0) f.add("seed " + std::to_string(seed) + " b not cofinal");
  }
  return f.outcome("100/100 instances: total preorder, b cofinal and outside the strict segment ideal");
}

// 9 -------------------------------------------------------------------------

Outcome ideals() {
  constexpr std::size_t n = 3;
  Failures f;
  std::size_t proper = 0, minimal = 0;
  for (std::uint32_t code = 0; code < 256; ++code) {
    std::vector<Mask> members;
    for (Mask m = 0; m < 8; ++m) {
      if ((code >> m) & 1) members.push_back(m);
    }
    const auto fam = make_family(n, members);
    if (!family_violations(fam).empty()) continue;
    ++proper;
    const std::string name = family_to_json(fam);
    const auto a = is_access_ideal(fam);
    if (a.witness) {
      const auto seg = seg_ideal(*a.witness, true);
      for (Mask s : seg->members) {
        if (!fam.contains(s)) f.add("access witness escapes " + name);
      }
    } else if (a.examined != 13) {
      f.add("no exhaustion certificate for " + name);
    }
    const auto r = is_minimal_access(fam);
    if (r.access != a.witness.has_value()) f.add("access disagreement " + name);
    if (r.minimal) {
      ++minimal;
      if (!r.witness) {
        f.add("minimal without witness " + name);
      } else if (seg_ideal(*r.witness, true)->members != fam.members) {
        f.add("bounded sets differ from members " + name);
      }
    } else if (r.access) {
      if (!r.blocking || !r.blocking_witness) {
        f.add("no blocking certificate " + name);
      } else {
        for (Mask s : r.blocking->members) {
          if (!fam.contains(s)) f.add("blocking ideal not inside " + name);
        }
        if (r.blocking->members.size() >= fam.members.size()) f.add("blocking ideal not proper " + name);
      }
    }
  }
  if (proper != 7) f.add(std::to_string(proper) + " proper ideals found");
  return f.outcome(std::to_string(proper) + " proper ideals decided, " + std::to_string(minimal) +
                   " minimal, bounded sets match members for each");
}

}  // namespace

int main(int argc, char** argv) {
  // Optional arguments select criteria by number.
  std::vector<int> only;
  for (int i = 1; i < argc; ++i) only.push_back(std::atoi(argv[i]));
  const auto wanted = [&](int id) { return only.empty() || std::find(only.begin(), only.end(), id) != only.end(); };

  struct Entry {
    int id;
    const char* title;
    double limit;
    Outcome (*body)();
  };
  const Entry entries[] = {
      {1, "natural arithmetic", 10, naturals},
      {2, "congruence mod w^w", 30, congruence},
      {3, "games versus theories on finite orders", 120, fraisse},
      {4, "symbolic strategy soundness", 60, strategy},
      {5, "concretization cross-check", 60, concretization},
      {6, "translation soundness", 300, translation},
      {7, "positivity implies monotonicity", 120, positivity},
      {8, "surgery verification", 30, surgery_runs},
      {9, "access and minimality decisions", 120, ideals},
  };
  bool ok = true;
  for (const auto& e : entries) {
    if (wanted(e.id)) ok &= run_criterion(e.id, e.title, e.limit, e.body);
  }
  std::cout << (ok ? "acceptance: all criteria passed" : "acceptance: FAILED") << std::endl;
  return ok ? 0 : 1;
}
