#pragma once

// Explicit finite relational structures: the ground truth for games and
// model checking.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace efw {

/// A relation stored as a dense bit array indexed by the tuple read as a
/// base-`universe` number (first coordinate least significant).
struct Relation {
  std::string name;
  unsigned arity = 0;
  std::vector<std::uint64_t> bits;
};

class FiniteStructure {
 public:
  FiniteStructure() = default;
  explicit FiniteStructure(std::size_t universe_size);

  std::size_t universe_size() const { return universe_; }

  /// Declares an empty relation. Throws InvalidInput on a duplicate name or
  /// when universe^arity exceeds 2^26.
  std::size_t add_relation(const std::string& name, unsigned arity);
  void add_tuple(std::size_t relation, const std::vector<std::size_t>& tuple);

  const std::vector<Relation>& relations() const { return relations_; }
  std::optional<std::size_t> find_relation(std::string_view name) const;
  const Relation& relation(std::string_view name) const;  // throws SignatureMismatch

  bool holds(std::size_t relation, const std::size_t* tuple) const;
  bool holds(std::size_t relation, std::initializer_list<std::size_t> tuple) const {
    return holds(relation, tuple.begin());
  }

  /// Ideal members as bitmasks over `ideal_atoms` atoms; present for
  /// powerset algebras, where element index = mask.
  const std::optional<std::vector<std::uint64_t>>& ideal() const { return ideal_; }
  unsigned ideal_atoms() const { return ideal_atoms_; }
  /// Attaches an ideal and materializes it as the unary relation "S".
  void set_ideal(unsigned atoms, std::vector<std::uint64_t> members);

  /// Names and arities agree, in any order.
  bool same_signature(const FiniteStructure& other) const;

 private:
  std::size_t universe_ = 0;
  std::vector<Relation> relations_;
  std::optional<std::vector<std::uint64_t>> ideal_;
  unsigned ideal_atoms_ = 0;
};

/// Reasons an ideal family fails the ideal axioms; empty when it is one.
std::vector<std::string> ideal_violations(unsigned atoms, const std::vector<std::uint64_t>& members);

/// Linear order 0 < 1 < ... < n-1 with relation "lt".
FiniteStructure linear_order(std::size_t n);

/// Powerset algebra over n atoms: element index = mask, relation "sub" for
/// inclusion, ideal = subsets of size < t as "S".
FiniteStructure powerset_algebra(unsigned n, unsigned t);

/// Two-sorted companion over n atoms: indices 0..n-1 are urelements
/// (unary "ur"), index n + mask is the set `mask`; relations "in" and "S"
/// (sets of size < t).
FiniteStructure two_sorted(unsigned n, unsigned t);

/// `{"universe":4,"relations":{"lt":[[0,1],...]},"ideal":[[],[0]]}`. With an
/// ideal the universe must be 2^k and entries are atom lists. Ideal axioms
/// are checked unless `check_ideal` is false.
FiniteStructure structure_from_json(std::string_view text, bool check_ideal = true);
std::string structure_to_json(const FiniteStructure& s);

/// `lin:n`, `pow:n:t`, `two:n:t`, inline JSON, or a path to a JSON file.
FiniteStructure load_structure(const std::string& spec);

/// Reads a whole file; throws InvalidInput when it cannot be opened.
std::string read_text_file(const std::string& path);

}  // namespace efw
