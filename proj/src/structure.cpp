#include "efw/structure.hpp"

#include <algorithm>
#include <bit>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "efw/error.hpp"

namespace efw {

namespace {

constexpr std::uint64_t kMaxCells = std::uint64_t{1} << 26;

std::uint64_t cell_count(std::size_t universe, unsigned arity) {
  std::uint64_t cells = 1;
  for (unsigned i = 0; i < arity; ++i) {
    cells *= universe;
    if (cells > kMaxCells) return kMaxCells + 1;
  }
  return cells;
}

std::size_t parse_size(const std::string& text, const std::string& spec) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used != text.size()) throw InvalidInput("bad number in structure spec " + spec);
    return v;
  } catch (const std::logic_error&) {
    throw InvalidInput("bad number in structure spec " + spec);
  }
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

}  // namespace

FiniteStructure::FiniteStructure(std::size_t universe_size) : universe_(universe_size) {}

std::size_t FiniteStructure::add_relation(const std::string& name, unsigned arity) {
  if (find_relation(name)) throw InvalidInput("duplicate relation " + name);
  const auto cells = cell_count(universe_, arity);
  if (cells > kMaxCells) throw InvalidInput("relation " + name + " is too large to store densely");
  relations_.push_back({name, arity, std::vector<std::uint64_t>((cells + 63) / 64, 0)});
  return relations_.size() - 1;
}

void FiniteStructure::add_tuple(std::size_t relation, const std::vector<std::size_t>& tuple) {
  Relation& r = relations_.at(relation);
  if (tuple.size() != r.arity) {
    throw InvalidInput("tuple of length " + std::to_string(tuple.size()) + " for relation " +
                       r.name + " of arity " + std::to_string(r.arity));
  }
  std::uint64_t index = 0;
  for (std::size_t i = tuple.size(); i-- > 0;) {
    if (tuple[i] >= universe_) {
      throw InvalidInput("element " + std::to_string(tuple[i]) + " outside universe in " + r.name);
    }
    index = index * universe_ + tuple[i];
  }
  r.bits[index / 64] |= std::uint64_t{1} << (index % 64);
}

std::optional<std::size_t> FiniteStructure::find_relation(std::string_view name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

const Relation& FiniteStructure::relation(std::string_view name) const {
  const auto i = find_relation(name);
  if (!i) throw SignatureMismatch("structure has no relation " + std::string(name));
  return relations_[*i];
}

bool FiniteStructure::holds(std::size_t relation, const std::size_t* tuple) const {
  const Relation& r = relations_[relation];
  std::uint64_t index = 0;
  for (unsigned i = r.arity; i-- > 0;) index = index * universe_ + tuple[i];
  return (r.bits[index / 64] >> (index % 64)) & 1;
}

void FiniteStructure::set_ideal(unsigned atoms, std::vector<std::uint64_t> members) {
  if (atoms >= 26 || (std::size_t{1} << atoms) != universe_) {
    throw InvalidInput("an ideal needs a universe of size 2^atoms");
  }
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  auto s = find_relation("S");
  if (!s) s = add_relation("S", 1);
  std::fill(relations_[*s].bits.begin(), relations_[*s].bits.end(), 0);
  for (auto m : members) {
    if (m >= universe_) throw InvalidInput("ideal member outside the atom range");
    add_tuple(*s, {static_cast<std::size_t>(m)});
  }
  ideal_atoms_ = atoms;
  ideal_ = std::move(members);
}

bool FiniteStructure::same_signature(const FiniteStructure& other) const {
  if (relations_.size() != other.relations_.size()) return false;
  for (const auto& r : relations_) {
    const auto j = other.find_relation(r.name);
    if (!j || other.relations_[*j].arity != r.arity) return false;
  }
  return true;
}

std::vector<std::string> ideal_violations(unsigned atoms, const std::vector<std::uint64_t>& members) {
  std::vector<std::string> out;
  const std::uint64_t top = atoms >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << atoms) - 1;
  auto contains = [&](std::uint64_t m) {
    return std::find(members.begin(), members.end(), m) != members.end();
  };
  if (contains(top)) out.push_back("ideal contains the top element");
  if (!contains(0)) out.push_back("ideal does not contain the empty set");
  for (auto m : members) {
    for (unsigned a = 0; a < atoms; ++a) {
      if ((m >> a & 1) && !contains(m & ~(std::uint64_t{1} << a))) {
        out.push_back("not downward closed at mask " + std::to_string(m));
        break;
      }
    }
    for (auto k : members) {
      if (!contains(m | k)) {
        out.push_back("not closed under join of masks " + std::to_string(m) + " and " +
                      std::to_string(k));
        break;
      }
    }
  }
  return out;
}

FiniteStructure linear_order(std::size_t n) {
  FiniteStructure s(n);
  const auto lt = s.add_relation("lt", 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) s.add_tuple(lt, {i, j});
  }
  return s;
}

FiniteStructure powerset_algebra(unsigned n, unsigned t) {
  if (n > 12) throw InvalidInput("powerset algebra limited to 12 atoms");
  const std::size_t size = std::size_t{1} << n;
  FiniteStructure s(size);
  const auto sub = s.add_relation("sub", 2);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = 0; b < size; ++b) {
      if ((a & ~b) == 0) s.add_tuple(sub, {a, b});
    }
  }
  std::vector<std::uint64_t> ideal;
  for (std::size_t a = 0; a < size; ++a) {
    if (static_cast<unsigned>(std::popcount(a)) < t) ideal.push_back(a);
  }
  s.set_ideal(n, std::move(ideal));
  return s;
}

FiniteStructure two_sorted(unsigned n, unsigned t) {
  if (n > 10) throw InvalidInput("two-sorted structure limited to 10 atoms");
  const std::size_t sets = std::size_t{1} << n;
  FiniteStructure s(n + sets);
  const auto ur = s.add_relation("ur", 1);
  const auto in = s.add_relation("in", 2);
  const auto small = s.add_relation("S", 1);
  for (std::size_t p = 0; p < n; ++p) s.add_tuple(ur, {p});
  for (std::size_t mask = 0; mask < sets; ++mask) {
    const std::size_t x = n + mask;
    if (static_cast<unsigned>(std::popcount(mask)) < t) s.add_tuple(small, {x});
    for (std::size_t p = 0; p < n; ++p) {
      if (mask >> p & 1) s.add_tuple(in, {p, x});
    }
  }
  return s;
}

FiniteStructure structure_from_json(std::string_view text, bool check_ideal) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw SyntaxError(e.byte, e.what());
  }
  try {
    FiniteStructure s(doc.at("universe").get<std::size_t>());
    if (doc.contains("relations")) {
      for (const auto& [name, tuples] : doc.at("relations").items()) {
        if (name == "S" && doc.contains("ideal")) {
          throw InvalidInput("relation S clashes with the ideal");
        }
        unsigned arity = tuples.empty() ? 0 : static_cast<unsigned>(tuples.front().size());
        if (tuples.empty() && doc.contains("arities")) arity = doc["arities"].at(name).get<unsigned>();
        const auto r = s.add_relation(name, arity);
        for (const auto& t : tuples) s.add_tuple(r, t.get<std::vector<std::size_t>>());
      }
    }
    if (doc.contains("ideal")) {
      const auto universe = s.universe_size();
      if (universe == 0 || (universe & (universe - 1)) != 0) {
        throw InvalidInput("a structure with an ideal needs a universe of size 2^k");
      }
      const auto atoms = static_cast<unsigned>(std::countr_zero(universe));
      std::vector<std::uint64_t> members;
      for (const auto& entry : doc.at("ideal")) {
        std::uint64_t mask = 0;
        for (auto a : entry.get<std::vector<unsigned>>()) {
          if (a >= atoms) throw InvalidInput("ideal entry names atom " + std::to_string(a));
          mask |= std::uint64_t{1} << a;
        }
        members.push_back(mask);
      }
      if (check_ideal) {
        if (auto v = ideal_violations(atoms, members); !v.empty()) throw InvalidInput(v.front());
      }
      s.set_ideal(atoms, std::move(members));
    }
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed structure: ") + e.what());
  }
}

std::string structure_to_json(const FiniteStructure& s) {
  nlohmann::ordered_json doc;
  doc["universe"] = s.universe_size();
  nlohmann::ordered_json rels = nlohmann::ordered_json::object();
  for (std::size_t r = 0; r < s.relations().size(); ++r) {
    const Relation& rel = s.relations()[r];
    if (rel.name == "S" && s.ideal()) continue;
    nlohmann::ordered_json tuples = nlohmann::ordered_json::array();
    const auto cells = cell_count(s.universe_size(), rel.arity);
    std::vector<std::size_t> tuple(rel.arity);
    for (std::uint64_t c = 0; c < cells; ++c) {
      std::uint64_t rest = c;
      for (unsigned i = 0; i < rel.arity; ++i) {
        tuple[i] = rest % s.universe_size();
        rest /= s.universe_size();
      }
      if (s.holds(r, tuple.data())) tuples.push_back(tuple);
    }
    rels[rel.name] = tuples;
  }
  doc["relations"] = rels;
  if (s.ideal()) {
    nlohmann::ordered_json ideal = nlohmann::ordered_json::array();
    for (auto m : *s.ideal()) {
      std::vector<unsigned> atoms;
      for (unsigned a = 0; a < s.ideal_atoms(); ++a) {
        if (m >> a & 1) atoms.push_back(a);
      }
      ideal.push_back(atoms);
    }
    doc["ideal"] = ideal;
  }
  return doc.dump();
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FiniteStructure load_structure(const std::string& spec) {
  const auto parts = split(spec, ':');
  if (!parts.empty() && parts[0] == "lin" && parts.size() == 2) {
    return linear_order(parse_size(parts[1], spec));
  }
  if (!parts.empty() && (parts[0] == "pow" || parts[0] == "two") && parts.size() == 3) {
    const auto n = static_cast<unsigned>(parse_size(parts[1], spec));
    const auto t = static_cast<unsigned>(parse_size(parts[2], spec));
    return parts[0] == "pow" ? powerset_algebra(n, t) : two_sorted(n, t);
  }
  const auto first = spec.find_first_not_of(" \t\n");
  if (first != std::string::npos && spec[first] == '{') return structure_from_json(spec);
  return structure_from_json(read_text_file(spec));
}

}  // namespace efw
