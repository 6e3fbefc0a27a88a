#pragma once

// Total preorders on small finite grounds, their segment ideals, access and
// minimality searches, and the cut-and-zip surgery on preorders.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace efw {

using Mask = std::uint64_t;

/// x <= y iff rank[x] <= rank[y]; ranks are dense (0..classes-1).
struct Preorder {
  std::vector<unsigned> rank;

  std::size_t size() const { return rank.size(); }
  bool leq(std::size_t x, std::size_t y) const { return rank[x] <= rank[y]; }
  bool less(std::size_t x, std::size_t y) const { return rank[x] < rank[y]; }
  unsigned classes() const;
  Mask top_class() const;
  /// {y : y <= x}
  Mask initial_segment(std::size_t x) const;
  /// {y : y < x}
  Mask strict_segment(std::size_t x) const;

  static Preorder linear(std::size_t n);
  /// Blocks of the given sizes, in increasing order.
  static Preorder blocks(const std::vector<std::size_t>& sizes);
  /// Validates reflexivity, transitivity and totality; throws InvalidInput.
  static Preorder from_matrix(const std::vector<std::vector<bool>>& rel);
  std::vector<std::vector<bool>> matrix() const;

  friend bool operator==(const Preorder&, const Preorder&) = default;
};

/// Structural check of a relation matrix: reasons it is not a total preorder.
std::vector<std::string> preorder_violations(const std::vector<std::vector<bool>>& rel);

/// All total preorders on n points, by number of classes, then
/// lexicographically by rank vector.
void enumerate_preorders(std::size_t n, const std::function<void(const Preorder&)>& visit);

struct IdealFamily {
  std::size_t ground = 0;
  std::vector<Mask> members;  // sorted, unique

  bool contains(Mask m) const;
  Mask join() const;  // union of all members
  static IdealFamily principal(std::size_t ground, Mask u);  // P(u)
  friend bool operator==(const IdealFamily&, const IdealFamily&) = default;
};

/// Sorts and dedups members; throws InvalidInput on out-of-range entries.
IdealFamily make_family(std::size_t ground, std::vector<Mask> members);

/// Reasons the family breaks the ideal axioms (empty set, downward closure,
/// join closure, properness).
std::vector<std::string> family_violations(const IdealFamily& f, bool require_join = true);

/// Subsets of strict (y < x) or non-strict (y <= x) initial segments.
/// Nullopt reports an improper family: the non-strict version always
/// contains the ground set, and the empty preorder has no proper ideal.
std::optional<IdealFamily> seg_ideal(const Preorder& p, bool strict);

struct AccessResult {
  std::optional<Preorder> witness;
  std::size_t examined = 0;  // preorders checked (exhaustion certificate)
};

/// Searches for a preorder with at least two classes (the finite shadow of
/// "no last element") whose strict segment ideal lies inside the family.
/// Ground <= 6; the family must be downward closed and proper.
AccessResult is_access_ideal(const IdealFamily& family);

struct MinimalResult {
  bool minimal = false;
  bool access = false;
  std::optional<Preorder> witness;               // for the family itself
  std::optional<IdealFamily> blocking;           // accessible proper sub-ideal
  std::optional<Preorder> blocking_witness;
  std::size_t sub_ideals_checked = 0;
};

/// Ground <= 5; the family must be an ideal. Sub-ideals of a finite ideal
/// P(U) are P(U') for U' strictly inside U.
MinimalResult is_minimal_access(const IdealFamily& family);

struct SurgeryInstance {
  Preorder base;
  std::size_t x0 = 0;
  Mask a = 0;
  Mask b = 0;
  std::vector<std::pair<std::size_t, std::size_t>> zip;  // (y in a minus the segment of x0, z in b)
};

/// Reasons the instance is invalid; empty when valid.
std::vector<std::string> surgery_violations(const SurgeryInstance& inst);

/// Reflexive-transitive closure of the base restricted off b plus both
/// directions of every zip pair. Throws InvalidInput on invalid instances.
Preorder surgery(const SurgeryInstance& inst);

struct Claim {
  std::string name;
  bool holds = false;
  std::vector<std::vector<std::size_t>> witnesses;
  std::string note;
};

/// (1) strict segments of p1 outside the segment of x0 sit inside strict
///     segments of the base;
/// (2) b meets the top class of p1, hence is not in its strict segment ideal;
/// (3) b is in the strict segment ideal of the base.
std::vector<Claim> verify_surgery_claims(const SurgeryInstance& inst, const Preorder& p1);

/// Random valid instance with nonempty b on a base of 2..max_size points.
SurgeryInstance random_surgery_instance(std::uint64_t seed, std::size_t max_size);

/// Least size of a cofinal well-ordered subset: 1 on nonempty finite
/// preorders (any top element), 0 on the empty one.
std::size_t cofinality(const Preorder& p);

std::vector<std::size_t> mask_elements(Mask m);
Mask elements_mask(const std::vector<std::size_t>& xs);

// JSON interchange.
Preorder preorder_from_json(const std::string& text);
std::string preorder_to_json(const Preorder& p);
IdealFamily family_from_json(const std::string& text);
std::string family_to_json(const IdealFamily& f);
SurgeryInstance surgery_from_json(const std::string& text);
std::string surgery_to_json(const SurgeryInstance& inst);
std::string claims_to_json(const std::vector<Claim>& claims);

}  // namespace efw
