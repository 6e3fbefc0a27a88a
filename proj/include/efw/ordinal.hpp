#pragma once

// Ordinal notations in Cantor normal form below epsilon_0, extended with
// opaque symbolic fixed points for uncountable cardinals and On.

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace efw {

/// An uncountable cardinal `Card(i)` (i >= 1) or the class of all ordinals.
/// Every tag is a fixed point of left multiplication by w^w.
struct SymbolTag {
  enum class Kind { Card, On };
  Kind kind = Kind::Card;
  std::uint32_t index = 1;  // meaningful for Card only

  static SymbolTag card(std::uint32_t i) { return {Kind::Card, i}; }
  static SymbolTag on() { return {Kind::On, 0}; }

  friend bool operator==(const SymbolTag&, const SymbolTag&) = default;
  friend std::strong_ordering operator<=>(const SymbolTag& a, const SymbolTag& b);
};

struct CnfTerm;

namespace detail {
struct FreeList {
  void* head = nullptr;
  std::size_t count = 0;
  ~FreeList();
};
FreeList& term_free_list();
}  // namespace detail

/// Allocator for term lists. Single-term blocks, by far the most common,
/// are recycled through a per-thread free list.
template <class T>
struct TermAllocator {
  using value_type = T;

  TermAllocator() = default;
  template <class U>
  TermAllocator(const TermAllocator<U>&) noexcept {}

  T* allocate(std::size_t n) {
    if (n == 1) {
      auto& list = detail::term_free_list();
      if (list.head) {
        void* p = list.head;
        list.head = *static_cast<void**>(p);
        --list.count;
        return static_cast<T*>(p);
      }
    }
    return static_cast<T*>(::operator new(n * sizeof(T)));
  }

  void deallocate(T* p, std::size_t n) noexcept {
    if (n == 1) {
      auto& list = detail::term_free_list();
      if (list.count < 4096) {
        *reinterpret_cast<void**>(p) = list.head;
        list.head = p;
        ++list.count;
        return;
      }
    }
    ::operator delete(p);
  }

  template <class U>
  friend bool operator==(const TermAllocator&, const TermAllocator<U>&) noexcept {
    return true;
  }
};

using Terms = std::vector<CnfTerm, TermAllocator<CnfTerm>>;

/// Either `Cnf(terms)` or `Symbolic(tag) + tail` with `tail < w^w`.
///
/// Cnf terms are kept strictly decreasing in exponent with coefficients >= 1;
/// exponents are themselves Cnf. The empty term list is 0. Values are
/// immutable once built; all arithmetic returns fresh values.
class Ordinal {
 public:
  Ordinal() = default;

  static Ordinal zero() { return {}; }
  static Ordinal natural(std::uint64_t n);
  static Ordinal omega();
  /// w^exponent; exponent must be Cnf.
  static Ordinal omega_power(const Ordinal& exponent, std::uint64_t coefficient = 1);
  static Ordinal cardinal(std::uint32_t index);
  static Ordinal on();
  /// Builds from already-canonical terms; throws InvalidInput otherwise.
  static Ordinal from_terms(Terms terms);
  static Ordinal symbolic(SymbolTag tag, Terms tail = {});

  bool is_symbolic() const { return symbol_.has_value(); }
  const std::optional<SymbolTag>& symbol() const { return symbol_; }
  /// Cnf terms, or the finite-exponent tail of a symbolic value.
  const Terms& terms() const { return terms_; }

  bool is_zero() const;
  std::optional<std::uint64_t> as_natural() const;
  /// True when the value is Cnf and below w^w (all exponents finite).
  bool below_omega_omega() const;
  /// Structural check of every representation invariant.
  bool is_canonical() const;

  std::string to_string() const;

  friend bool operator==(const Ordinal& a, const Ordinal& b);
  friend std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b);

 private:
  std::optional<SymbolTag> symbol_;
  Terms terms_;
};

struct CnfTerm {
  Ordinal exponent;
  std::uint64_t coefficient = 1;

  friend bool operator==(const CnfTerm& a, const CnfTerm& b) {
    return a.coefficient == b.coefficient && a.exponent == b.exponent;
  }
};

std::strong_ordering compare(const Ordinal& a, const Ordinal& b);

/// Ordinal sum. Symbolic values are allowed on the left only with a tail that
/// stays below w^w; `Cnf + Symbolic` absorbs the left operand.
Ordinal add(const Ordinal& a, const Ordinal& b);

/// Ordinal product. A symbolic right factor follows the sup clause
/// (`a * Card(i) = Card(i)` for nonzero Cnf `a`); a symbolic left factor is
/// rejected with UnsupportedOperand.
Ordinal mul(const Ordinal& a, const Ordinal& b);

/// Parses the textual notation (`w`, `^`, `*`, `+`, parentheses, `Card(i)`,
/// `On`). Non-canonical input is normalized.
Ordinal parse_ordinal(std::string_view text);

struct Decomposition {
  Ordinal quotient;
  Ordinal remainder;
};

/// a = w^w * quotient + remainder with remainder < w^w.
Decomposition decompose_mod_omega_omega(const Ordinal& a);

struct CongruenceWitness {
  Ordinal xi;
  Ordinal eta;
  Ordinal delta;
};

/// Congruence modulo w^w: shared remainder, quotients both zero or both
/// nonzero. Returns nullopt when not congruent.
std::optional<CongruenceWitness> congruent_mod_omega_omega(const Ordinal& a, const Ordinal& b);

/// First-order equivalence of the well-orders <a,<> and <b,<>.
bool elementarily_equivalent(const Ordinal& a, const Ordinal& b);

}  // namespace efw
