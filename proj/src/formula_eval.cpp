#include "efw/formula_eval.hpp"

#include <algorithm>

#include "efw/error.hpp"

namespace efw {

namespace {

constexpr std::size_t kMemoLimit = 4096;

std::vector<std::uint8_t> dense(const FiniteStructure& s, const char* name, unsigned arity) {
  const auto r = s.find_relation(name);
  if (!r || s.relations()[*r].arity != arity) return {};
  const std::size_t u = s.universe_size();
  std::vector<std::uint8_t> out(arity == 1 ? u : u * u, 0);
  std::size_t t[2] = {0, 0};
  for (std::size_t i = 0; i < u; ++i) {
    t[0] = i;
    if (arity == 1) {
      out[i] = s.holds(*r, t);
      continue;
    }
    for (std::size_t j = 0; j < u; ++j) {
      t[1] = j;
      out[i * u + j] = s.holds(*r, t);
    }
  }
  return out;
}

void require(bool ok, Language lang, const char* what) {
  if (!ok) throw SignatureMismatch(language_name(lang) + " needs a structure with " + what);
}

}  // namespace

std::vector<std::uint64_t> cof_sets(std::size_t n) {
  std::vector<std::uint64_t> out;
  if (n == 0 || n > 20) return out;
  const std::uint64_t top = std::uint64_t{1} << (n - 1);
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    if (m & top) out.push_back(m);
  }
  return out;
}

Model make_model(const FiniteStructure& s, Language lang, bool cofinal_sets) {
  Model m;
  m.lang = lang;
  m.universe = s.universe_size();
  switch (lang) {
    case Language::Lord:
    case Language::Lmon:
      m.lt = dense(s, "lt", 2);
      require(!m.lt.empty() || m.universe == 0, lang, "a binary relation lt");
      for (std::size_t i = 0; i < m.universe; ++i) m.individuals.push_back(i);
      if (lang == Language::Lmon) {
        if (m.universe > 20) throw InvalidInput("lmon set quantification limited to 20 elements");
        if (cofinal_sets) {
          m.sets = cof_sets(m.universe);
        } else {
          for (std::uint64_t x = 0; x < (std::uint64_t{1} << m.universe); ++x) m.sets.push_back(x);
        }
      }
      break;
    case Language::LbS:
      m.sub = dense(s, "sub", 2);
      m.small = dense(s, "S", 1);
      require(!m.sub.empty() && !m.small.empty(), lang, "relations sub and S");
      for (std::size_t i = 0; i < m.universe; ++i) m.individuals.push_back(i);
      break;
    case Language::L1S: {
      const auto ur = dense(s, "ur", 1);
      m.in = dense(s, "in", 2);
      m.small = dense(s, "S", 1);
      require(!ur.empty() && !m.in.empty() && !m.small.empty(), lang, "relations ur, in and S");
      for (std::size_t i = 0; i < m.universe; ++i) (ur[i] ? m.urelements : m.sets).push_back(i);
      break;
    }
  }
  return m;
}

Evaluator::Evaluator(Model model) : model_(std::move(model)) {}

const std::vector<std::uint64_t>& Evaluator::domain(Sort s) const {
  switch (s) {
    case Sort::Individual: return model_.individuals;
    case Sort::Urelement: return model_.urelements;
    case Sort::Set: return model_.sets;
  }
  return model_.individuals;
}

int Evaluator::compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope,
                       std::uint64_t& used) {
  auto slot_of = [&](const Variable& v) {
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == v.name) return it->second;
    }
    throw UnboundVariable("variable " + v.name + " is not bound");
  };
  auto note = [&used](int slot) {
    if (slot < 64) used |= std::uint64_t{1} << slot;
    else used = ~std::uint64_t{0};
  };
  auto need = [&](bool ok) {
    if (!ok) {
      throw SignatureMismatch("atom " + to_string(f) + " is not interpreted in " +
                              language_name(model_.lang) + " structures");
    }
  };
  Node node{f.kind()};
  switch (f.kind()) {
    case Kind::True:
    case Kind::False:
      break;
    case Kind::Less: need(!model_.lt.empty() || model_.universe == 0); break;
    case Kind::Subeq: need(!model_.sub.empty()); break;
    case Kind::UrIn: need(!model_.in.empty()); break;
    case Kind::In: need(model_.lang == Language::Lmon); break;
    case Kind::S: need(!model_.small.empty()); break;
    default: break;
  }
  if (f.is_atomic()) {
    node.a = slot_of(f.var());
    note(node.a);
    if (f.kind() != Kind::S) {
      node.b = slot_of(f.var2());
      note(node.b);
    }
  } else if (f.kind() == Kind::Not) {
    node.l = compile(f.left(), scope, used);
  } else if (f.is_binary()) {
    node.l = compile(f.left(), scope, used);
    node.r = compile(f.right(), scope, used);
  } else if (f.is_quantifier()) {
    const int slot = static_cast<int>(slot_sort_.size());
    if (f.var().sort == Sort::Set && model_.lang != Language::Lmon && model_.lang != Language::L1S) {
      throw SignatureMismatch("set quantifier outside lmon and l1s");
    }
    slot_sort_.push_back(f.var().sort);
    node.a = slot;
    scope.emplace_back(f.var().name, slot);
    std::uint64_t inner = 0;
    node.l = compile(f.body(), scope, inner);
    scope.pop_back();
    const std::uint64_t own = slot < 64 ? std::uint64_t{1} << slot : 0;
    const bool trackable = inner != ~std::uint64_t{0} && slot < 64;
    used = (used == ~std::uint64_t{0} || !trackable) ? ~std::uint64_t{0} : used | (inner & ~own);
    if (trackable) {
      std::size_t table = 1;
      node.free_begin = static_cast<int>(free_slots_.size());
      for (int s = 0; s < 64 && table <= kMemoLimit; ++s) {
        if ((inner & ~own) >> s & 1) {
          free_slots_.push_back(s);
          table *= std::max<std::size_t>(domain(slot_sort_[s]).size(), 1);
        }
      }
      node.free_end = static_cast<int>(free_slots_.size());
      if (table <= kMemoLimit) {
        node.memo = static_cast<int>(memo_size_);
        memo_size_ += table;
      }
    }
  }
  nodes_.push_back(node);
  return static_cast<int>(nodes_.size()) - 1;
}

bool Evaluator::eval(const Formula& f, const Assignment& assignment) {
  nodes_.clear();
  free_slots_.clear();
  slot_sort_.clear();
  memo_size_ = 0;
  std::vector<std::pair<std::string, int>> scope;
  std::vector<std::uint64_t> initial;
  std::vector<std::uint32_t> initial_pos;
  for (const auto& v : free_variables(f)) {
    const auto it = assignment.find(v.name);
    if (it == assignment.end()) throw UnboundVariable("no value for free variable " + v.name);
    if (v.sort == Sort::Individual && model_.lang == Language::L1S) {
      throw SignatureMismatch("l1s structures have no individual variables");
    }
    const auto& dom = domain(v.sort);
    const auto at = std::find(dom.begin(), dom.end(), it->second);
    if (at == dom.end()) {
      throw InvalidInput("value " + std::to_string(it->second) + " of " + v.name + " is outside its domain");
    }
    scope.emplace_back(v.name, static_cast<int>(slot_sort_.size()));
    slot_sort_.push_back(v.sort);
    initial.push_back(it->second);
    initial_pos.push_back(static_cast<std::uint32_t>(at - dom.begin()));
  }
  std::uint64_t used = 0;
  const int root = compile(f, scope, used);
  val_.assign(slot_sort_.size(), 0);
  pos_.assign(slot_sort_.size(), 0);
  std::copy(initial.begin(), initial.end(), val_.begin());
  std::copy(initial_pos.begin(), initial_pos.end(), pos_.begin());
  memo_.assign(memo_size_, -1);
  return run(root);
}

bool Evaluator::run(int index) {
  const Node& n = nodes_[static_cast<std::size_t>(index)];
  const std::size_t u = model_.universe;
  switch (n.kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Less: return model_.lt[val_[n.a] * u + val_[n.b]];
    case Kind::Eq:
    case Kind::UrEq: return val_[n.a] == val_[n.b];
    case Kind::Subeq: return model_.sub[val_[n.a] * u + val_[n.b]];
    case Kind::S: return model_.small[val_[n.a]];
    case Kind::UrIn: return model_.in[val_[n.a] * u + val_[n.b]];
    case Kind::In: return (val_[n.b] >> val_[n.a]) & 1;
    case Kind::Not: return !run(n.l);
    case Kind::And: return run(n.l) && run(n.r);
    case Kind::Or: return run(n.l) || run(n.r);
    case Kind::Implies: return !run(n.l) || run(n.r);
    case Kind::Exists:
    case Kind::Forall: {
      std::size_t key = 0;
      if (n.memo >= 0) {
        for (int i = n.free_begin; i < n.free_end; ++i) {
          const int s = free_slots_[static_cast<std::size_t>(i)];
          key = key * domain(slot_sort_[s]).size() + pos_[s];
        }
        const std::int8_t cached = memo_[static_cast<std::size_t>(n.memo) + key];
        if (cached >= 0) return cached;
      }
      const bool exists = n.kind == Kind::Exists;
      const auto& dom = domain(slot_sort_[n.a]);
      bool result = !exists;
      for (std::size_t p = 0; p < dom.size(); ++p) {
        val_[n.a] = dom[p];
        pos_[n.a] = static_cast<std::uint32_t>(p);
        if (run(n.l) == exists) {
          result = exists;
          break;
        }
      }
      if (n.memo >= 0) memo_[static_cast<std::size_t>(n.memo) + key] = result;
      return result;
    }
  }
  return false;
}

bool eval(const Formula& f, const FiniteStructure& s, Language lang, const Assignment& assignment,
          bool cofinal_sets) {
  Evaluator ev(make_model(s, lang, cofinal_sets));
  return ev.eval(f, assignment);
}

}  // namespace efw
