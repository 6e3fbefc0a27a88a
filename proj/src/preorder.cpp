#include "efw/preorder.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <random>

#include <json.hpp>

#include "efw/error.hpp"

namespace efw {

namespace {

using json = nlohmann::ordered_json;

constexpr std::size_t kAccessLimit = 6;
constexpr std::size_t kMinimalLimit = 5;
constexpr std::size_t kMaxGround = 20;

Mask bit(std::size_t x) { return Mask{1} << x; }
Mask full(std::size_t n) { return n >= 64 ? ~Mask{0} : bit(n) - 1; }

bool is_subset(Mask a, Mask b) { return (a & ~b) == 0; }

// Compositions of n points into k nonempty ranked classes, lexicographic in
// the rank vector.
void surjections(std::vector<unsigned>& rank, std::size_t at, unsigned k, std::vector<std::size_t>& hits,
                 std::size_t missing, const std::function<void(const Preorder&)>& visit) {
  const std::size_t n = rank.size();
  if (at == n) {
    if (missing == 0) visit(Preorder{rank});
    return;
  }
  if (n - at < missing) return;
  for (unsigned r = 0; r < k; ++r) {
    rank[at] = r;
    const bool fresh = hits[r]++ == 0;
    surjections(rank, at + 1, k, hits, missing - (fresh ? 1 : 0), visit);
    --hits[r];
  }
}

std::vector<std::size_t> json_elements(const json& j, std::size_t ground, const char* what) {
  if (!j.is_array()) throw InvalidInput(std::string(what) + " must be an array of elements");
  std::vector<std::size_t> out;
  for (const auto& e : j) {
    if (!e.is_number_unsigned()) throw InvalidInput(std::string(what) + " entries must be naturals");
    const auto x = e.get<std::size_t>();
    if (x >= ground) throw InvalidInput(std::string(what) + " entry " + std::to_string(x) + " outside the ground");
    out.push_back(x);
  }
  return out;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw InvalidInput(std::string("malformed json: ") + e.what());
  }
}

json preorder_json(const Preorder& p) {
  json rel = json::array();
  for (const auto& row : p.matrix()) {
    json r = json::array();
    for (bool b : row) r.push_back(b);
    rel.push_back(r);
  }
  return json{{"size", p.size()}, {"rel", rel}};
}

Preorder preorder_from(const json& j) {
  if (!j.is_object() || !j.contains("size") || !j.contains("rel")) {
    throw InvalidInput("a preorder needs fields size and rel");
  }
  const auto n = j["size"].get<std::size_t>();
  const auto& rel = j["rel"];
  if (!rel.is_array() || rel.size() != n) throw InvalidInput("rel must have size rows");
  std::vector<std::vector<bool>> m(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!rel[i].is_array() || rel[i].size() != n) throw InvalidInput("rel must be a square matrix");
    for (const auto& b : rel[i]) {
      if (b.is_boolean()) m[i].push_back(b.get<bool>());
      else if (b.is_number_integer()) m[i].push_back(b.get<int>() != 0);
      else throw InvalidInput("rel entries must be booleans");
    }
  }
  return Preorder::from_matrix(m);
}

json elements_json(Mask m) { return json(mask_elements(m)); }

}  // namespace

std::vector<std::size_t> mask_elements(Mask m) {
  std::vector<std::size_t> out;
  for (std::size_t x = 0; m; ++x, m >>= 1) {
    if (m & 1) out.push_back(x);
  }
  return out;
}

Mask elements_mask(const std::vector<std::size_t>& xs) {
  Mask m = 0;
  for (auto x : xs) {
    if (x >= 64) throw InvalidInput("element " + std::to_string(x) + " out of range");
    m |= bit(x);
  }
  return m;
}

// ------------------------------------------------------------- preorders

unsigned Preorder::classes() const {
  return rank.empty() ? 0 : *std::max_element(rank.begin(), rank.end()) + 1;
}

Mask Preorder::top_class() const {
  const unsigned top = classes();
  Mask m = 0;
  for (std::size_t x = 0; x < size(); ++x) {
    if (rank[x] + 1 == top) m |= bit(x);
  }
  return m;
}

Mask Preorder::initial_segment(std::size_t x) const {
  Mask m = 0;
  for (std::size_t y = 0; y < size(); ++y) {
    if (leq(y, x)) m |= bit(y);
  }
  return m;
}

Mask Preorder::strict_segment(std::size_t x) const {
  Mask m = 0;
  for (std::size_t y = 0; y < size(); ++y) {
    if (less(y, x)) m |= bit(y);
  }
  return m;
}

Preorder Preorder::linear(std::size_t n) {
  Preorder p;
  p.rank.resize(n);
  std::iota(p.rank.begin(), p.rank.end(), 0u);
  return p;
}

Preorder Preorder::blocks(const std::vector<std::size_t>& sizes) {
  Preorder p;
  unsigned r = 0;
  for (auto s : sizes) {
    if (s == 0) continue;
    p.rank.insert(p.rank.end(), s, r++);
  }
  return p;
}

std::vector<std::string> preorder_violations(const std::vector<std::vector<bool>>& rel) {
  std::vector<std::string> out;
  const std::size_t n = rel.size();
  for (const auto& row : rel) {
    if (row.size() != n) {
      out.push_back("matrix is not square");
      return out;
    }
  }
  for (std::size_t x = 0; x < n; ++x) {
    if (!rel[x][x]) out.push_back("not reflexive at " + std::to_string(x));
    for (std::size_t y = 0; y < n; ++y) {
      if (!rel[x][y] && !rel[y][x]) {
        out.push_back("not total at " + std::to_string(x) + "," + std::to_string(y));
      }
      for (std::size_t z = 0; z < n; ++z) {
        if (rel[x][y] && rel[y][z] && !rel[x][z]) {
          out.push_back("not transitive at " + std::to_string(x) + "," + std::to_string(y) + "," +
                        std::to_string(z));
        }
      }
    }
  }
  return out;
}

Preorder Preorder::from_matrix(const std::vector<std::vector<bool>>& rel) {
  const auto bad = preorder_violations(rel);
  if (!bad.empty()) throw InvalidInput("not a total preorder: " + bad.front());
  const std::size_t n = rel.size();
  // For a total preorder, the number of strictly smaller classes is read off
  // the down-set sizes.
  std::vector<std::size_t> down(n, 0);
  for (std::size_t x = 0; x < n; ++x) {
    for (std::size_t y = 0; y < n; ++y) down[x] += rel[y][x] ? 1 : 0;
  }
  std::vector<std::size_t> levels = down;
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());
  Preorder p;
  for (std::size_t x = 0; x < n; ++x) {
    p.rank.push_back(static_cast<unsigned>(std::lower_bound(levels.begin(), levels.end(), down[x]) - levels.begin()));
  }
  return p;
}

std::vector<std::vector<bool>> Preorder::matrix() const {
  std::vector<std::vector<bool>> m(size(), std::vector<bool>(size()));
  for (std::size_t x = 0; x < size(); ++x) {
    for (std::size_t y = 0; y < size(); ++y) m[x][y] = leq(x, y);
  }
  return m;
}

void enumerate_preorders(std::size_t n, const std::function<void(const Preorder&)>& visit) {
  if (n == 0) {
    visit(Preorder{});
    return;
  }
  std::vector<unsigned> rank(n, 0);
  for (unsigned k = 1; k <= n; ++k) {
    std::vector<std::size_t> hits(k, 0);
    surjections(rank, 0, k, hits, k, visit);
  }
}

// ---------------------------------------------------------------- ideals

bool IdealFamily::contains(Mask m) const { return std::binary_search(members.begin(), members.end(), m); }

Mask IdealFamily::join() const {
  Mask u = 0;
  for (auto m : members) u |= m;
  return u;
}

IdealFamily IdealFamily::principal(std::size_t ground, Mask u) {
  IdealFamily f{ground, {}};
  for (Mask s = u;; s = (s - 1) & u) {
    f.members.push_back(s);
    if (s == 0) break;
  }
  std::sort(f.members.begin(), f.members.end());
  return f;
}

IdealFamily make_family(std::size_t ground, std::vector<Mask> members) {
  if (ground > kMaxGround) throw InvalidInput("ground size above " + std::to_string(kMaxGround));
  for (auto m : members) {
    if (!is_subset(m, full(ground))) throw InvalidInput("member outside the ground set");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return {ground, std::move(members)};
}

std::vector<std::string> family_violations(const IdealFamily& f, bool require_join) {
  std::vector<std::string> out;
  auto show = [](Mask m) {
    std::string s = "{";
    for (auto x : mask_elements(m)) s += (s.size() > 1 ? "," : "") + std::to_string(x);
    return s + "}";
  };
  if (!f.contains(0)) out.push_back("empty set missing");
  if (f.contains(full(f.ground))) out.push_back("ground set is a member (improper)");
  for (auto m : f.members) {
    for (auto x : mask_elements(m)) {
      if (!f.contains(m & ~bit(x))) {
        out.push_back("not downward closed: " + show(m & ~bit(x)) + " below " + show(m));
        break;
      }
    }
  }
  if (require_join) {
    for (std::size_t i = 0; i < f.members.size(); ++i) {
      for (std::size_t j = i + 1; j < f.members.size(); ++j) {
        const Mask u = f.members[i] | f.members[j];
        if (!f.contains(u)) {
          out.push_back("not closed under union: " + show(f.members[i]) + " and " + show(f.members[j]));
          return out;
        }
      }
    }
  }
  return out;
}

std::optional<IdealFamily> seg_ideal(const Preorder& p, bool strict) {
  if (p.size() == 0 || !strict) return std::nullopt;
  if (p.size() > kMaxGround) throw InvalidInput("ground size above " + std::to_string(kMaxGround));
  std::vector<Mask> members;
  for (std::size_t x = 0; x < p.size(); ++x) {
    const auto sub = IdealFamily::principal(p.size(), p.strict_segment(x));
    members.insert(members.end(), sub.members.begin(), sub.members.end());
  }
  return make_family(p.size(), std::move(members));
}

namespace {

bool seg_inside(const Preorder& p, const IdealFamily& f) {
  // Strict segments are nested and downward closure holds, so checking the
  // maximal segments suffices.
  for (std::size_t x = 0; x < p.size(); ++x) {
    if (!f.contains(p.strict_segment(x))) return false;
  }
  return true;
}

}  // namespace

AccessResult is_access_ideal(const IdealFamily& family) {
  if (family.ground > kAccessLimit) {
    throw BudgetExceeded("access search limited to ground size " + std::to_string(kAccessLimit));
  }
  const auto bad = family_violations(family, false);
  if (!bad.empty()) throw InvalidInput("not an ideal: " + bad.front());
  AccessResult result;
  enumerate_preorders(family.ground, [&](const Preorder& p) {
    if (result.witness) return;
    ++result.examined;
    if (p.classes() >= 2 && seg_inside(p, family)) result.witness = p;
  });
  return result;
}

MinimalResult is_minimal_access(const IdealFamily& family) {
  if (family.ground > kMinimalLimit) {
    throw BudgetExceeded("minimality search limited to ground size " + std::to_string(kMinimalLimit));
  }
  const auto bad = family_violations(family, true);
  if (!bad.empty()) throw InvalidInput("not an ideal: " + bad.front());
  MinimalResult result;
  const auto own = is_access_ideal(family);
  result.witness = own.witness;
  result.access = own.witness.has_value();
  if (!result.access) return result;
  const Mask u = family.join();
  for (Mask v = (u - 1) & u;; v = (v - 1) & u) {
    ++result.sub_ideals_checked;
    const auto sub = IdealFamily::principal(family.ground, v);
    const auto found = is_access_ideal(sub);
    if (found.witness) {
      result.blocking = sub;
      result.blocking_witness = found.witness;
      return result;
    }
    if (v == 0) break;
  }
  result.minimal = true;
  return result;
}

// --------------------------------------------------------------- surgery

std::vector<std::string> surgery_violations(const SurgeryInstance& inst) {
  std::vector<std::string> out;
  const std::size_t n = inst.base.size();
  if (n == 0) return {"empty base"};
  if (n > kMaxGround) return {"base larger than " + std::to_string(kMaxGround)};
  if (inst.x0 >= n) return {"x0 outside the base"};
  if (!is_subset(inst.a, full(n)) || !is_subset(inst.b, full(n))) return {"a or b outside the base"};
  const Mask seg = inst.base.initial_segment(inst.x0);
  const Mask y = full(n) & ~seg;
  const Mask ay = inst.a & y;
  if (!is_subset(inst.b, seg)) out.push_back("b is not inside the initial segment of x0");
  if ((inst.a & inst.base.top_class()) == 0) out.push_back("a is not cofinal in the base");
  if (std::popcount(ay) != std::popcount(inst.b)) out.push_back("|b| differs from |a minus the segment of x0|");
  Mask seen_y = 0, seen_z = 0;
  for (const auto& [yy, z] : inst.zip) {
    if (yy >= n || z >= n || !(ay & bit(yy)) || !(inst.b & bit(z))) {
      out.push_back("zip pair " + std::to_string(yy) + "," + std::to_string(z) + " is not in (a minus segment) x b");
      continue;
    }
    if ((seen_y & bit(yy)) || (seen_z & bit(z))) out.push_back("zip is not injective");
    seen_y |= bit(yy);
    seen_z |= bit(z);
  }
  if (seen_y != ay || seen_z != inst.b) out.push_back("zip is not a bijection onto b");
  return out;
}

Preorder surgery(const SurgeryInstance& inst) {
  const auto bad = surgery_violations(inst);
  if (!bad.empty()) throw InvalidInput("invalid surgery instance: " + bad.front());
  const std::size_t n = inst.base.size();
  std::vector<Mask> up(n, 0);  // up[u] has v iff u R v
  for (std::size_t u = 0; u < n; ++u) {
    up[u] |= bit(u);
    if (inst.b & bit(u)) continue;
    for (std::size_t v = 0; v < n; ++v) {
      if (!(inst.b & bit(v)) && inst.base.leq(u, v)) up[u] |= bit(v);
    }
  }
  for (const auto& [y, z] : inst.zip) {
    up[y] |= bit(z);
    up[z] |= bit(y);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t u = 0; u < n; ++u) {
      if (up[u] & bit(k)) up[u] |= up[k];
    }
  }
  std::vector<std::vector<bool>> m(n, std::vector<bool>(n));
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t v = 0; v < n; ++v) m[u][v] = (up[u] >> v) & 1;
  }
  return Preorder::from_matrix(m);
}

std::vector<Claim> verify_surgery_claims(const SurgeryInstance& inst, const Preorder& p1) {
  const std::size_t n = inst.base.size();
  if (p1.size() != n) throw InvalidInput("p1 and the base have different sizes");
  const Mask seg0 = inst.base.initial_segment(inst.x0);
  std::vector<Claim> claims;

  Claim inside{"segments_inside_base_extended", true, {}, ""};
  for (std::size_t x = 0; x < n; ++x) {
    const Mask m = p1.strict_segment(x) & ~seg0;
    std::optional<std::size_t> bound;
    for (std::size_t w = 0; w < n && !bound; ++w) {
      if (is_subset(m, inst.base.strict_segment(w))) bound = w;
    }
    if (bound) {
      inside.witnesses.push_back({x, *bound});
    } else {
      inside.holds = false;
      inside.witnesses.push_back({x});
    }
  }
  inside.note = inside.holds ? "pairs (x, w): the p1 segment of x minus the segment of x0 lies below w in the base"
                             : "singletons mark p1 segments unbounded in the base outside the segment of x0";
  claims.push_back(inside);

  Claim cofinal{"b_not_in_seg_p1", false, {}, ""};
  const Mask top = p1.top_class() & inst.b;
  if (top) {
    cofinal.holds = true;
    cofinal.witnesses.push_back(mask_elements(top));
    cofinal.note = "elements of b in the top class of p1";
  } else {
    cofinal.note = inst.b == 0 ? "b is empty and lies in every segment ideal" : "b misses the top class of p1";
  }
  claims.push_back(cofinal);

  Claim base{"b_in_seg_base", false, {}, ""};
  for (std::size_t w = 0; w < n; ++w) {
    if (is_subset(inst.b, inst.base.strict_segment(w))) {
      base.holds = true;
      base.witnesses.push_back({w});
      base.note = "b lies strictly below this base element";
      break;
    }
  }
  if (!base.holds) base.note = "b meets the top class of the base";
  claims.push_back(base);
  return claims;
}

SurgeryInstance random_surgery_instance(std::uint64_t seed, std::size_t max_size) {
  if (max_size < 2) throw InvalidInput("random instances need max_size >= 2");
  if (max_size > kMaxGround) throw InvalidInput("max_size above " + std::to_string(kMaxGround));
  std::mt19937_64 rng(seed);
  auto below = [&rng](std::size_t k) { return static_cast<std::size_t>(rng() % k); };
  const std::size_t n = 2 + below(max_size - 1);
  SurgeryInstance inst;
  // Random surjective ranks with at least two classes.
  const unsigned k = 2 + static_cast<unsigned>(below(n - 1));
  std::vector<unsigned> rank(n);
  for (std::size_t i = 0; i < n; ++i) rank[i] = i < k ? static_cast<unsigned>(i) : static_cast<unsigned>(below(k));
  std::shuffle(rank.begin(), rank.end(), rng);
  inst.base.rank = rank;

  std::vector<std::size_t> low;
  for (std::size_t x = 0; x < n; ++x) {
    if (rank[x] + 1 < k) low.push_back(x);
  }
  inst.x0 = low[below(low.size())];
  const Mask seg = inst.base.initial_segment(inst.x0);
  std::vector<std::size_t> seg_elems = mask_elements(seg);
  std::vector<std::size_t> y_elems = mask_elements(full(n) & ~seg);
  std::vector<std::size_t> tops = mask_elements(inst.base.top_class());

  const std::size_t t = tops[below(tops.size())];
  std::shuffle(y_elems.begin(), y_elems.end(), rng);
  const std::size_t cap = std::min(y_elems.size(), seg_elems.size());
  const std::size_t count = 1 + below(cap);
  std::vector<std::size_t> ay{t};
  for (auto v : y_elems) {
    if (ay.size() == count) break;
    if (v != t) ay.push_back(v);
  }
  inst.a = elements_mask(ay);
  for (auto v : seg_elems) {
    if (rng() & 1) inst.a |= bit(v);
  }
  std::shuffle(seg_elems.begin(), seg_elems.end(), rng);
  std::sort(ay.begin(), ay.end());
  for (std::size_t i = 0; i < ay.size(); ++i) {
    inst.b |= bit(seg_elems[i]);
    inst.zip.emplace_back(ay[i], seg_elems[i]);
  }
  return inst;
}

std::size_t cofinality(const Preorder& p) { return p.size() == 0 ? 0 : 1; }

// ------------------------------------------------------------------ json

Preorder preorder_from_json(const std::string& text) { return preorder_from(parse_json(text)); }

std::string preorder_to_json(const Preorder& p) { return preorder_json(p).dump(); }

IdealFamily family_from_json(const std::string& text) {
  const json j = parse_json(text);
  if (!j.is_object() || !j.contains("ground") || !j.contains("members")) {
    throw InvalidInput("an ideal family needs fields ground and members");
  }
  const auto ground = j["ground"].get<std::size_t>();
  if (ground > kMaxGround) throw InvalidInput("ground size above " + std::to_string(kMaxGround));
  if (!j["members"].is_array()) throw InvalidInput("members must be an array");
  std::vector<Mask> members;
  for (const auto& m : j["members"]) members.push_back(elements_mask(json_elements(m, ground, "member")));
  return make_family(ground, std::move(members));
}

std::string family_to_json(const IdealFamily& f) {
  json members = json::array();
  for (auto m : f.members) members.push_back(elements_json(m));
  return json{{"ground", f.ground}, {"members", members}}.dump();
}

SurgeryInstance surgery_from_json(const std::string& text) {
  const json j = parse_json(text);
  for (const char* key : {"base", "x0", "a", "b", "zip"}) {
    if (!j.is_object() || !j.contains(key)) throw InvalidInput(std::string("surgery instance needs field ") + key);
  }
  SurgeryInstance inst;
  inst.base = preorder_from(j["base"]);
  const std::size_t n = inst.base.size();
  inst.x0 = j["x0"].get<std::size_t>();
  inst.a = elements_mask(json_elements(j["a"], n, "a"));
  inst.b = elements_mask(json_elements(j["b"], n, "b"));
  if (!j["zip"].is_array()) throw InvalidInput("zip must be an array of pairs");
  for (const auto& pair : j["zip"]) {
    const auto yz = json_elements(pair, n, "zip pair");
    if (yz.size() != 2) throw InvalidInput("zip entries are [y, z] pairs");
    inst.zip.emplace_back(yz[0], yz[1]);
  }
  return inst;
}

std::string surgery_to_json(const SurgeryInstance& inst) {
  json zip = json::array();
  for (const auto& [y, z] : inst.zip) zip.push_back({y, z});
  return json{{"base", preorder_json(inst.base)},
              {"x0", inst.x0},
              {"a", elements_json(inst.a)},
              {"b", elements_json(inst.b)},
              {"zip", zip}}
      .dump();
}

std::string claims_to_json(const std::vector<Claim>& claims) {
  json out = json::array();
  for (const auto& c : claims) {
    out.push_back({{"assertion", c.name}, {"holds", c.holds}, {"witnesses", c.witnesses}, {"note", c.note}});
  }
  return out.dump();
}

}  // namespace efw
