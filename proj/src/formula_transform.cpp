#include <algorithm>
#include <cctype>
#include <map>
#include <set>

#include "efw/error.hpp"
#include "efw/formula.hpp"

namespace efw {

namespace {

void collect_names(const Formula& f, std::set<std::string>& out) {
  if (f.is_atomic()) {
    out.insert(f.var().name);
    if (f.kind() != Kind::S) out.insert(f.var2().name);
    return;
  }
  if (f.is_quantifier()) out.insert(f.var().name);
  if (f.kind() == Kind::Not || f.is_quantifier()) collect_names(f.left(), out);
  if (f.is_binary()) {
    collect_names(f.left(), out);
    collect_names(f.right(), out);
  }
}

// Numeric suffix of `name` when it is `prefix` followed by digits only.
std::optional<std::uint64_t> index_suffix(const std::string& name, char prefix) {
  if (name.size() < 2 || name.front() != prefix) return std::nullopt;
  for (std::size_t i = 1; i < name.size(); ++i) {
    if (!std::isdigit(static_cast<unsigned char>(name[i]))) return std::nullopt;
  }
  if (name.size() > 10) return std::nullopt;
  return std::stoull(name.substr(1));
}

std::string fresh_name(const std::string& base, const std::set<std::string>& used) {
  if (!used.count(base)) return base;
  for (std::size_t k = 1;; ++k) {
    std::string candidate = base + std::to_string(k);
    if (!used.count(candidate)) return candidate;
  }
}

// Renames free occurrences of `from` (a binder inside with the same name
// shadows it).
Formula rename(const Formula& f, const Variable& from, const Variable& to) {
  if (f.is_atomic()) {
    const Variable a = f.var() == from ? to : f.var();
    const Variable b = f.var2() == from ? to : f.var2();
    return Formula::atom(f.kind(), a, b);
  }
  if (f.is_quantifier()) {
    if (f.var() == from) return f;
    return Formula::quantifier(f.kind(), f.var(), rename(f.body(), from, to));
  }
  if (f.kind() == Kind::Not) return Formula::negation(rename(f.left(), from, to));
  if (f.is_binary()) return Formula::binary(f.kind(), rename(f.left(), from, to), rename(f.right(), from, to));
  return f;
}

// ------------------------------------------------------------ translations

class PlusTranslator {
 public:
  explicit PlusTranslator(const Formula& f) {
    std::uint64_t max_index = 0;
    bool any = false;
    std::vector<Variable> pending;
    for (const auto& v : all_variables(f)) {
      const auto i = index_suffix(v.name, v.sort == Sort::Urelement ? 'p' : 'x');
      if (i) {
        const std::uint64_t y = v.sort == Sort::Urelement ? 2 * *i : 2 * *i + 1;
        map_[v.name] = y;
        max_index = std::max(max_index, y);
        any = true;
      } else {
        pending.push_back(v);
      }
    }
    std::uint64_t next = any ? max_index + 1 : 0;
    for (const auto& v : pending) {
      const std::uint64_t parity = v.sort == Sort::Urelement ? 0 : 1;
      if (next % 2 != parity) ++next;
      map_[v.name] = next++;
    }
  }

  Formula operator()(const Formula& f) const {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
        return f;
      case Kind::UrEq:
      case Kind::Eq:
        return Formula::atom(Kind::Eq, y(f.var()), y(f.var2()));
      case Kind::UrIn:
        return Formula::conjunction(atom_formula(y(f.var()).name),
                                    Formula::atom(Kind::Subeq, y(f.var()), y(f.var2())));
      case Kind::S:
        return Formula::atom(Kind::S, y(f.var()));
      case Kind::Not:
        return Formula::negation((*this)(f.left()));
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
        return Formula::binary(f.kind(), (*this)(f.left()), (*this)(f.right()));
      case Kind::Exists:
      case Kind::Forall: {
        const Variable v = y(f.var());
        Formula body = (*this)(f.body());
        if (f.var().sort == Sort::Urelement) {
          body = f.kind() == Kind::Exists ? Formula::conjunction(atom_formula(v.name), body)
                                          : Formula::implication(atom_formula(v.name), body);
        }
        return Formula::quantifier(f.kind(), v, body);
      }
      default:
        throw SignatureMismatch("translate_plus expects an l1s formula, found " + to_string(f));
    }
  }

 private:
  static std::vector<Variable> all_variables(const Formula& f) {
    std::vector<Variable> out;
    walk(f, out);
    return out;
  }
  static void walk(const Formula& f, std::vector<Variable>& out) {
    auto note = [&out](const Variable& v) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    };
    if (f.is_atomic()) {
      note(f.var());
      if (f.kind() != Kind::S) note(f.var2());
      return;
    }
    if (f.is_quantifier()) note(f.var());
    if (f.kind() == Kind::Not || f.is_quantifier()) walk(f.left(), out);
    if (f.is_binary()) {
      walk(f.left(), out);
      walk(f.right(), out);
    }
  }

  Variable y(const Variable& v) const {
    return {"y" + std::to_string(map_.at(v.name)), Sort::Individual};
  }

  std::map<std::string, std::uint64_t> map_;
};

class PrimeTranslator {
 public:
  explicit PrimeTranslator(const Formula& f) {
    std::set<std::string> names;
    collect_names(f, names);
    std::set<std::string> used = names;
    for (const auto& n : names) {
      if (sort_of(n, Language::L1S) == Sort::Set) {
        map_[n] = n;
      } else {
        std::string renamed = "x" + n;
        while (used.count(renamed)) renamed = "x" + renamed;
        used.insert(renamed);
        map_[n] = renamed;
      }
    }
  }

  Formula operator()(const Formula& f) const {
    switch (f.kind()) {
      case Kind::True:
      case Kind::False:
        return f;
      case Kind::Eq:
        return Formula::atom(Kind::Eq, x(f.var()), x(f.var2()));
      case Kind::S:
        return Formula::atom(Kind::S, x(f.var()));
      case Kind::Subeq: {
        const Variable p{"p0", Sort::Urelement};
        return Formula::forall(p, Formula::implication(Formula::atom(Kind::UrIn, p, x(f.var())),
                                                       Formula::atom(Kind::UrIn, p, x(f.var2()))));
      }
      case Kind::Not:
        return Formula::negation((*this)(f.left()));
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
        return Formula::binary(f.kind(), (*this)(f.left()), (*this)(f.right()));
      case Kind::Exists:
      case Kind::Forall:
        return Formula::quantifier(f.kind(), x(f.var()), (*this)(f.body()));
      default:
        throw SignatureMismatch("translate_prime expects an lbs formula, found " + to_string(f));
    }
  }

 private:
  Variable x(const Variable& v) const { return {map_.at(v.name), Sort::Set}; }
  std::map<std::string, std::string> map_;
};

// ------------------------------------------------------------------ prenex

Formula negate_literal(const Formula& lit) {
  if (lit.kind() == Kind::Not) return lit.left();
  if (lit.kind() == Kind::True) return Formula::falsity();
  if (lit.kind() == Kind::False) return Formula::truth();
  return Formula::negation(lit);
}

Formula nnf(const Formula& f, bool negated) {
  switch (f.kind()) {
    case Kind::True:
      return negated ? Formula::falsity() : f;
    case Kind::False:
      return negated ? Formula::truth() : f;
    case Kind::Not:
      return nnf(f.left(), !negated);
    case Kind::And:
    case Kind::Or: {
      const bool conj = (f.kind() == Kind::And) != negated;
      Formula l = nnf(f.left(), negated);
      Formula r = nnf(f.right(), negated);
      return conj ? Formula::conjunction(l, r) : Formula::disjunction(l, r);
    }
    case Kind::Implies: {
      Formula l = nnf(f.left(), !negated);
      Formula r = nnf(f.right(), negated);
      return negated ? Formula::conjunction(l, r) : Formula::disjunction(l, r);
    }
    case Kind::Exists:
    case Kind::Forall: {
      const bool ex = (f.kind() == Kind::Exists) != negated;
      return Formula::quantifier(ex ? Kind::Exists : Kind::Forall, f.var(), nnf(f.body(), negated));
    }
    default:
      if (negated && f.kind() == Kind::In) {
        throw UnsupportedFragment("membership under negation: " + to_string(f));
      }
      return negated ? Formula::negation(f) : f;
  }
}

// Renames binders whose name is already taken so all bound names are
// distinct from each other and from the free names.
Formula standardize(const Formula& f, std::set<std::string>& used) {
  if (f.is_quantifier()) {
    Variable v = f.var();
    Formula body = f.body();
    if (used.count(v.name)) {
      const Variable fresh{fresh_name(v.name, used), v.sort};
      body = rename(body, v, fresh);
      v = fresh;
    }
    used.insert(v.name);
    return Formula::quantifier(f.kind(), v, standardize(body, used));
  }
  if (f.is_binary()) {
    Formula l = standardize(f.left(), used);
    Formula r = standardize(f.right(), used);
    return Formula::binary(f.kind(), l, r);
  }
  return f;
}

using Prefix = std::vector<std::pair<Kind, Variable>>;

Formula pull_quantifiers(const Formula& f, Prefix& prefix) {
  if (f.is_quantifier()) {
    prefix.emplace_back(f.kind(), f.var());
    return pull_quantifiers(f.body(), prefix);
  }
  if (f.is_binary()) {
    Formula l = pull_quantifiers(f.left(), prefix);
    Formula r = pull_quantifiers(f.right(), prefix);
    return Formula::binary(f.kind(), l, r);
  }
  return f;
}

using Clause = std::vector<Formula>;
constexpr std::size_t kClauseBudget = 4096;

std::vector<Clause> cnf(const Formula& f) {
  if (f.kind() == Kind::True) return {};
  if (f.kind() == Kind::False) return {Clause{}};
  if (f.kind() == Kind::And) {
    auto l = cnf(f.left());
    auto r = cnf(f.right());
    l.insert(l.end(), r.begin(), r.end());
    if (l.size() > kClauseBudget) throw UnsupportedFragment("matrix CNF exceeds " + std::to_string(kClauseBudget) + " clauses");
    return l;
  }
  if (f.kind() == Kind::Or) {
    const auto l = cnf(f.left());
    const auto r = cnf(f.right());
    if (l.size() * r.size() > kClauseBudget) {
      throw UnsupportedFragment("matrix CNF exceeds " + std::to_string(kClauseBudget) + " clauses");
    }
    std::vector<Clause> out;
    for (const auto& a : l) {
      for (const auto& b : r) {
        Clause c = a;
        c.insert(c.end(), b.begin(), b.end());
        out.push_back(std::move(c));
      }
    }
    return out;
  }
  return {Clause{f}};
}

using Conj = std::vector<Formula>;

bool mentions(const Conj& c, const Variable& v) {
  return std::any_of(c.begin(), c.end(), [&](const Formula& lit) {
    const Formula& a = lit.kind() == Kind::Not ? lit.left() : lit;
    return a.is_atomic() && (a.var() == v || (a.kind() != Kind::S && a.var2() == v));
  });
}

bool has_equation(const Conj& c, const Variable& u, const Variable& w) {
  return std::any_of(c.begin(), c.end(), [&](const Formula& lit) {
    return lit.kind() == Kind::Eq &&
           ((lit.var() == u && lit.var2() == w) || (lit.var() == w && lit.var2() == u));
  });
}

// Drops trivially true literals; nullopt when the conjunction is false.
std::optional<Conj> simplify(const Conj& c) {
  Conj out;
  for (const auto& lit : c) {
    const bool neg = lit.kind() == Kind::Not;
    const Formula& a = neg ? lit.left() : lit;
    bool value_known = false;
    bool value = false;
    if (a.kind() == Kind::True || a.kind() == Kind::False) {
      value_known = true;
      value = a.kind() == Kind::True;
    } else if ((a.kind() == Kind::Eq || a.kind() == Kind::Less) && a.var() == a.var2()) {
      value_known = true;
      value = a.kind() == Kind::Eq;
    }
    if (value_known) {
      if (value == neg) return std::nullopt;
      continue;
    }
    if (std::find(out.begin(), out.end(), lit) == out.end()) out.push_back(lit);
  }
  return out;
}

Formula conj_formula(const Conj& c) {
  if (c.empty()) return Formula::truth();
  Formula f = c.front();
  for (std::size_t i = 1; i < c.size(); ++i) f = Formula::conjunction(f, c[i]);
  return f;
}

Conj substitute(const Conj& c, const Variable& from, const Variable& to) {
  Conj out;
  for (const auto& lit : c) out.push_back(rename(lit, from, to));
  return out;
}

}  // namespace

Formula translate_plus(const Formula& f) { return PlusTranslator(f)(f); }

Formula translate_prime(const Formula& f) { return PrimeTranslator(f)(f); }

Formula moschovakis_prenex(const Formula& f) {
  if (!is_normal(f)) throw UnsupportedFragment("set quantifiers are not allowed: " + to_string(f));
  if (auto bad = positivity_violation(f)) {
    throw UnsupportedFragment("not positive at " + to_string(*bad));
  }
  std::optional<Variable> set_var;
  for (const auto& v : free_variables(f)) {
    if (v.sort != Sort::Set) continue;
    if (set_var && !(*set_var == v)) throw UnsupportedFragment("more than one set variable");
    set_var = v;
  }
  const Variable X = set_var.value_or(Variable{"X", Sort::Set});

  std::set<std::string> used;
  for (const auto& v : free_variables(f)) used.insert(v.name);
  used.insert(X.name);
  Prefix prefix;
  const Formula matrix = pull_quantifiers(standardize(nnf(f, false), used), prefix);

  const Variable u{fresh_name("u", used), Sort::Individual};
  used.insert(u.name);
  std::vector<Conj> theta;
  Prefix witnesses;
  for (const auto& clause : cnf(matrix)) {
    Conj negated_rest;
    std::vector<Variable> members;
    for (const auto& lit : clause) {
      if (lit.kind() == Kind::In) {
        if (std::find(members.begin(), members.end(), lit.var()) == members.end()) members.push_back(lit.var());
      } else {
        negated_rest.push_back(negate_literal(lit));
      }
    }
    if (members.empty()) {
      theta.push_back(negated_rest);
    } else if (members.size() == 1) {
      Conj c = negated_rest;
      c.push_back(Formula::atom(Kind::Eq, u, members.front()));
      theta.push_back(c);
    } else {
      const Variable w{fresh_name("w", used), Sort::Individual};
      used.insert(w.name);
      witnesses.emplace_back(Kind::Exists, w);
      Conj outside = negated_rest;
      for (const auto& t : members) outside.push_back(Formula::negation(Formula::atom(Kind::Eq, w, t)));
      Conj chosen = negated_rest;
      chosen.push_back(Formula::atom(Kind::Eq, u, w));
      theta.push_back(outside);
      theta.push_back(chosen);
    }
  }
  prefix.insert(prefix.end(), witnesses.begin(), witnesses.end());

  // A trailing universal w disappears when every disjunct ignores w or pins
  // it to u.
  while (!prefix.empty() && prefix.back().first == Kind::Forall) {
    const Variable w = prefix.back().second;
    const bool absorbable = std::all_of(theta.begin(), theta.end(), [&](const Conj& c) {
      return !mentions(c, w) || has_equation(c, u, w);
    });
    if (!absorbable) break;
    for (auto& c : theta) c = substitute(c, w, u);
    prefix.pop_back();
  }

  Variable out_u = u;
  if (u.name != "u") {
    bool taken = std::any_of(prefix.begin(), prefix.end(), [](const auto& q) { return q.second.name == "u"; });
    for (const auto& v : free_variables(f)) taken = taken || v.name == "u";
    if (!taken) out_u = {"u", Sort::Individual};
  }

  std::vector<Formula> disjuncts;
  bool always = false;
  for (const auto& c : theta) {
    auto s = simplify(out_u == u ? c : substitute(c, u, out_u));
    if (!s) continue;
    if (s->empty()) always = true;
    disjuncts.push_back(conj_formula(*s));
  }
  Formula body = Formula::falsity();
  if (always) {
    body = Formula::truth();
  } else if (!disjuncts.empty()) {
    body = disjuncts.front();
    for (std::size_t i = 1; i < disjuncts.size(); ++i) body = Formula::disjunction(body, disjuncts[i]);
  }
  Formula out = Formula::forall(out_u, Formula::implication(body, Formula::atom(Kind::In, out_u, X)));
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) out = Formula::quantifier(it->first, it->second, out);
  return out;
}

}  // namespace efw
