#pragma once

// Formulas of the four languages: L_ord {<}, L_b(S) {<=, S}, L_1(S)
// {p = q, p in x, S(x)} and the monadic second-order L_mon {<, x in X}.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace efw {

enum class Language { Lord, LbS, L1S, Lmon };

Language parse_language(std::string_view name);  // lord, lbs, l1s, lmon
std::string language_name(Language lang);

enum class Sort { Individual, Urelement, Set };

struct Variable {
  std::string name;
  Sort sort = Sort::Individual;

  friend bool operator==(const Variable&, const Variable&) = default;
};

enum class Kind {
  True, False,
  Less, Eq, Subeq, S, UrEq, UrIn, In,
  Not, And, Or, Implies,
  Exists, Forall,
};

struct FormulaNode;

/// Immutable formula handle; copies share structure. Equality is
/// structural.
class Formula {
 public:
  Formula();  // true

  static Formula truth();
  static Formula falsity();
  /// Binary atom, or unary for S (b ignored).
  static Formula atom(Kind kind, Variable a, Variable b = {});
  static Formula negation(Formula f);
  static Formula conjunction(Formula l, Formula r);
  static Formula disjunction(Formula l, Formula r);
  static Formula implication(Formula l, Formula r);
  static Formula exists(Variable v, Formula body);
  static Formula forall(Variable v, Formula body);
  static Formula binary(Kind kind, Formula l, Formula r);
  static Formula quantifier(Kind kind, Variable v, Formula body);

  Kind kind() const;
  /// First atom argument, or the bound variable of a quantifier.
  const Variable& var() const;
  /// Second atom argument.
  const Variable& var2() const;
  /// Operand of Not, left of a binary node, body of a quantifier.
  const Formula& left() const;
  const Formula& right() const;
  const Formula& body() const { return left(); }

  bool is_atomic() const;
  bool is_binary() const;
  bool is_quantifier() const;
  /// Number of AST nodes.
  std::size_t size() const;
  const FormulaNode* node() const { return node_.get(); }

  friend bool operator==(const Formula& a, const Formula& b);

 private:
  explicit Formula(std::shared_ptr<const FormulaNode> node) : node_(std::move(node)) {}
  std::shared_ptr<const FormulaNode> node_;
};

struct FormulaNode {
  Kind kind = Kind::True;
  Variable a;
  Variable b;
  Formula l;
  Formula r;
  std::size_t size = 1;
};

/// Sort of a variable name under a language: Lmon upper case names are
/// sets; in L1S names starting with p or q are urelements and other names
/// are sets; everything else is an individual.
Sort sort_of(std::string_view name, Language lang);

/// Parses with the language supplied out of band. Throws SyntaxError.
Formula parse_formula(std::string_view text, Language lang);

/// Canonical text; parse_formula(to_string(f)) == f.
std::string to_string(const Formula& f);

/// The L_b(S) formula "y is an atom": nonzero, and every z <= y is 0 or y.
Formula atom_formula(const std::string& y);

std::size_t quantifier_rank(const Formula& f);
/// No quantified set variables.
bool is_normal(const Formula& f);

enum class FormulaClass { Normal, Pi11, Sigma11, Other };
FormulaClass classify(const Formula& f);
std::string class_name(FormulaClass c);

/// Free variables in order of first occurrence.
std::vector<Variable> free_variables(const Formula& f);
bool uses_only(const Formula& f, Language lang);
/// Contains neither In atoms nor set variables.
bool is_lord(const Formula& f);

/// Membership in the least class containing L_ord formulas and x in X,
/// closed under &, |, first-order quantifiers, and `theta -> psi` with
/// theta in L_ord.
bool is_positive(const Formula& f);
/// The first subformula that breaks positivity, if any.
std::optional<Formula> positivity_violation(const Formula& f);

/// L_1(S) to L_b(S): p_i -> y_{2i}, x_j -> y_{2j+1}, urelement quantifiers
/// relativized to Atom, p in x -> Atom(y) & y <= y'.
Formula translate_plus(const Formula& f);

/// L_b(S) to L_1(S): x <= y -> A p0. (p0 in x -> p0 in y); = and S unchanged.
Formula translate_prime(const Formula& f);

/// Prenex form Q w. A u. (theta -> u in X) of a positive normal formula,
/// equivalent to it on every linear order for every X other than the whole
/// universe. Throws UnsupportedFragment.
Formula moschovakis_prenex(const Formula& f);

struct EnumerationConfig {
  Language lang = Language::Lord;
  std::size_t max_rank = 2;
  std::size_t max_size = 4;
  bool use_not = true;
  bool use_and = true;
  bool use_or = true;
  bool use_implies = true;
  bool use_exists = true;
  bool use_forall = true;
  bool use_constants = false;
  /// Lmon only: also quantify set variables.
  bool set_quantifiers = false;
  /// Free variables available to every formula.
  std::vector<Variable> scope;
};

/// Streams every formula (sentence when the scope is empty) within the
/// bounds, by increasing size, each exactly once. Bound variables at depth d
/// are named by sort prefix and d (x, p, X). Returns the number emitted.
std::uint64_t enumerate_formulas(const EnumerationConfig& config,
                                 const std::function<void(const Formula&)>& emit);

}  // namespace efw
