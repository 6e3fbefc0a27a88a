#include <algorithm>
#include <cctype>

#include "efw/error.hpp"
#include "efw/formula.hpp"

namespace efw {

Formula::Formula() : Formula(truth()) {}

Formula Formula::truth() {
  static const auto node = std::make_shared<const FormulaNode>(
      FormulaNode{Kind::True, {}, {}, Formula(std::shared_ptr<const FormulaNode>()),
                  Formula(std::shared_ptr<const FormulaNode>()), 1});
  return Formula(node);
}

Formula Formula::falsity() {
  static const auto node = std::make_shared<const FormulaNode>(
      FormulaNode{Kind::False, {}, {}, Formula(std::shared_ptr<const FormulaNode>()),
                  Formula(std::shared_ptr<const FormulaNode>()), 1});
  return Formula(node);
}

Formula Formula::atom(Kind kind, Variable a, Variable b) {
  switch (kind) {
    case Kind::Less: case Kind::Eq: case Kind::Subeq: case Kind::UrEq: case Kind::UrIn: case Kind::In:
      break;
    case Kind::S:
      b = {};
      break;
    default:
      throw InvalidInput("not an atomic kind");
  }
  auto node = std::make_shared<FormulaNode>();
  node->kind = kind;
  node->a = std::move(a);
  node->b = std::move(b);
  node->l = Formula(std::shared_ptr<const FormulaNode>());
  node->r = Formula(std::shared_ptr<const FormulaNode>());
  return Formula(std::move(node));
}

Formula Formula::negation(Formula f) {
  auto node = std::make_shared<FormulaNode>();
  node->kind = Kind::Not;
  node->size = f.size() + 1;
  node->l = std::move(f);
  node->r = Formula(std::shared_ptr<const FormulaNode>());
  return Formula(std::move(node));
}

Formula Formula::binary(Kind kind, Formula l, Formula r) {
  if (kind != Kind::And && kind != Kind::Or && kind != Kind::Implies) {
    throw InvalidInput("not a binary connective");
  }
  auto node = std::make_shared<FormulaNode>();
  node->kind = kind;
  node->size = l.size() + r.size() + 1;
  node->l = std::move(l);
  node->r = std::move(r);
  return Formula(std::move(node));
}

Formula Formula::conjunction(Formula l, Formula r) { return binary(Kind::And, std::move(l), std::move(r)); }
Formula Formula::disjunction(Formula l, Formula r) { return binary(Kind::Or, std::move(l), std::move(r)); }
Formula Formula::implication(Formula l, Formula r) {
  return binary(Kind::Implies, std::move(l), std::move(r));
}

Formula Formula::quantifier(Kind kind, Variable v, Formula body) {
  if (kind != Kind::Exists && kind != Kind::Forall) throw InvalidInput("not a quantifier");
  auto node = std::make_shared<FormulaNode>();
  node->kind = kind;
  node->a = std::move(v);
  node->size = body.size() + 1;
  node->l = std::move(body);
  node->r = Formula(std::shared_ptr<const FormulaNode>());
  return Formula(std::move(node));
}

Formula Formula::exists(Variable v, Formula body) { return quantifier(Kind::Exists, std::move(v), std::move(body)); }
Formula Formula::forall(Variable v, Formula body) { return quantifier(Kind::Forall, std::move(v), std::move(body)); }

Kind Formula::kind() const { return node_->kind; }
const Variable& Formula::var() const { return node_->a; }
const Variable& Formula::var2() const { return node_->b; }
const Formula& Formula::left() const { return node_->l; }
const Formula& Formula::right() const { return node_->r; }
std::size_t Formula::size() const { return node_->size; }

bool Formula::is_atomic() const {
  switch (kind()) {
    case Kind::Less: case Kind::Eq: case Kind::Subeq: case Kind::S: case Kind::UrEq: case Kind::UrIn:
    case Kind::In:
      return true;
    default:
      return false;
  }
}

bool Formula::is_binary() const {
  return kind() == Kind::And || kind() == Kind::Or || kind() == Kind::Implies;
}

bool Formula::is_quantifier() const { return kind() == Kind::Exists || kind() == Kind::Forall; }

bool operator==(const Formula& x, const Formula& y) {
  if (x.node_ == y.node_) return true;
  if (!x.node_ || !y.node_) return false;
  const FormulaNode& a = *x.node_;
  const FormulaNode& b = *y.node_;
  if (a.kind != b.kind || a.size != b.size) return false;
  if (x.is_atomic() || x.is_quantifier()) {
    if (!(a.a == b.a) || !(a.b == b.b)) return false;
  }
  if (x.kind() == Kind::Not || x.is_quantifier()) return a.l == b.l;
  if (x.is_binary()) return a.l == b.l && a.r == b.r;
  return true;
}

Language parse_language(std::string_view name) {
  if (name == "lord") return Language::Lord;
  if (name == "lbs") return Language::LbS;
  if (name == "l1s") return Language::L1S;
  if (name == "lmon") return Language::Lmon;
  throw InvalidInput("unknown language " + std::string(name) + " (lord, lbs, l1s, lmon)");
}

std::string language_name(Language lang) {
  switch (lang) {
    case Language::Lord: return "lord";
    case Language::LbS: return "lbs";
    case Language::L1S: return "l1s";
    case Language::Lmon: return "lmon";
  }
  return "?";
}

Sort sort_of(std::string_view name, Language lang) {
  const bool upper = !name.empty() && std::isupper(static_cast<unsigned char>(name.front()));
  if (lang == Language::Lmon) return upper ? Sort::Set : Sort::Individual;
  if (lang == Language::L1S) {
    return !name.empty() && (name.front() == 'p' || name.front() == 'q') ? Sort::Urelement : Sort::Set;
  }
  return Sort::Individual;
}

std::size_t quantifier_rank(const Formula& f) {
  if (f.is_quantifier()) return 1 + quantifier_rank(f.body());
  if (f.kind() == Kind::Not) return quantifier_rank(f.left());
  if (f.is_binary()) return std::max(quantifier_rank(f.left()), quantifier_rank(f.right()));
  return 0;
}

bool is_normal(const Formula& f) {
  if (f.is_quantifier()) return f.var().sort != Sort::Set && is_normal(f.body());
  if (f.kind() == Kind::Not) return is_normal(f.left());
  if (f.is_binary()) return is_normal(f.left()) && is_normal(f.right());
  return true;
}

FormulaClass classify(const Formula& f) {
  if (is_normal(f)) return FormulaClass::Normal;
  Formula g = f;
  const Kind block = g.kind();
  if (!g.is_quantifier() || g.var().sort != Sort::Set) return FormulaClass::Other;
  while (g.kind() == block && g.var().sort == Sort::Set) g = g.body();
  if (!is_normal(g)) return FormulaClass::Other;
  return block == Kind::Forall ? FormulaClass::Pi11 : FormulaClass::Sigma11;
}

std::string class_name(FormulaClass c) {
  switch (c) {
    case FormulaClass::Normal: return "normal";
    case FormulaClass::Pi11: return "pi11";
    case FormulaClass::Sigma11: return "sigma11";
    case FormulaClass::Other: return "other";
  }
  return "?";
}

namespace {

void collect_free(const Formula& f, std::vector<Variable>& bound, std::vector<Variable>& out) {
  auto note = [&](const Variable& v) {
    if (std::find(bound.begin(), bound.end(), v) != bound.end()) return;
    if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
  };
  if (f.is_atomic()) {
    note(f.var());
    if (f.kind() != Kind::S) note(f.var2());
    return;
  }
  if (f.is_quantifier()) {
    bound.push_back(f.var());
    collect_free(f.body(), bound, out);
    bound.pop_back();
    return;
  }
  if (f.kind() == Kind::Not) collect_free(f.left(), bound, out);
  if (f.is_binary()) {
    collect_free(f.left(), bound, out);
    collect_free(f.right(), bound, out);
  }
}

bool kind_in(Kind k, Language lang) {
  switch (lang) {
    case Language::Lord: return k == Kind::Less || k == Kind::Eq;
    case Language::LbS: return k == Kind::Subeq || k == Kind::Eq || k == Kind::S;
    case Language::L1S: return k == Kind::UrEq || k == Kind::UrIn || k == Kind::S || k == Kind::Eq;
    case Language::Lmon: return k == Kind::Less || k == Kind::Eq || k == Kind::In;
  }
  return false;
}

}  // namespace

std::vector<Variable> free_variables(const Formula& f) {
  std::vector<Variable> bound, out;
  collect_free(f, bound, out);
  return out;
}

bool uses_only(const Formula& f, Language lang) {
  if (f.is_atomic()) return kind_in(f.kind(), lang);
  if (f.kind() == Kind::Not || f.is_quantifier()) return uses_only(f.left(), lang);
  if (f.is_binary()) return uses_only(f.left(), lang) && uses_only(f.right(), lang);
  return true;
}

bool is_lord(const Formula& f) {
  if (f.is_atomic()) return f.kind() == Kind::Less || f.kind() == Kind::Eq;
  if (f.is_quantifier()) return f.var().sort == Sort::Individual && is_lord(f.body());
  if (f.kind() == Kind::Not) return is_lord(f.left());
  if (f.is_binary()) return is_lord(f.left()) && is_lord(f.right());
  return true;
}

std::optional<Formula> positivity_violation(const Formula& f) {
  if (is_lord(f)) return std::nullopt;
  switch (f.kind()) {
    case Kind::In:
      return std::nullopt;
    case Kind::And:
    case Kind::Or:
      if (auto v = positivity_violation(f.left())) return v;
      return positivity_violation(f.right());
    case Kind::Implies:
      if (!is_lord(f.left())) return f;
      return positivity_violation(f.right());
    case Kind::Exists:
    case Kind::Forall:
      if (f.var().sort == Sort::Set) return f;
      return positivity_violation(f.body());
    default:
      return f;
  }
}

bool is_positive(const Formula& f) { return !positivity_violation(f).has_value(); }

Formula atom_formula(const std::string& y) {
  const Variable v{y, Sort::Individual};
  const Variable z{y + "z", Sort::Individual};
  const Variable w{y + "w", Sort::Individual};
  Formula nonzero = Formula::negation(Formula::forall(z, Formula::atom(Kind::Subeq, v, z)));
  Formula z_is_zero = Formula::forall(w, Formula::atom(Kind::Subeq, z, w));
  Formula below = Formula::forall(
      z, Formula::implication(Formula::atom(Kind::Subeq, z, v),
                              Formula::disjunction(Formula::atom(Kind::Eq, z, v), z_is_zero)));
  return Formula::conjunction(nonzero, below);
}

}  // namespace efw
