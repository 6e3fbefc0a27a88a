#include "efw/formula.hpp"

namespace efw {

namespace {

using Sink = std::function<void(const Formula&)>;

class Enumerator {
 public:
  explicit Enumerator(const EnumerationConfig& config) : config_(config) {}

  // The scope is passed down explicitly: a sink may resume generation of a
  // sibling operand while a quantifier body is still being produced.
  void formulas(std::size_t size, std::size_t rank, const std::vector<Variable>& scope, const Sink& sink) {
    if (size == 0) return;
    if (size == 1) {
      atoms(scope, sink);
      return;
    }
    if (config_.use_not) {
      formulas(size - 1, rank, scope, [&](const Formula& f) { sink(Formula::negation(f)); });
    }
    for (Kind op : {Kind::And, Kind::Or, Kind::Implies}) {
      if (!enabled(op)) continue;
      for (std::size_t ls = 1; ls + 2 <= size; ++ls) {
        formulas(ls, rank, scope, [&](const Formula& l) {
          formulas(size - 1 - ls, rank, scope, [&](const Formula& r) { sink(Formula::binary(op, l, r)); });
        });
      }
    }
    if (rank == 0) return;
    for (Kind q : {Kind::Exists, Kind::Forall}) {
      if ((q == Kind::Exists && !config_.use_exists) || (q == Kind::Forall && !config_.use_forall)) continue;
      for (Sort sort : quantified_sorts()) {
        const Variable v = bound_variable(sort, scope.size());
        std::vector<Variable> inner = scope;
        inner.push_back(v);
        formulas(size - 1, rank - 1, inner, [&](const Formula& body) { sink(Formula::quantifier(q, v, body)); });
      }
    }
  }

 private:
  bool enabled(Kind op) const {
    switch (op) {
      case Kind::And: return config_.use_and;
      case Kind::Or: return config_.use_or;
      case Kind::Implies: return config_.use_implies;
      default: return false;
    }
  }

  std::vector<Sort> quantified_sorts() const {
    switch (config_.lang) {
      case Language::L1S: return {Sort::Urelement, Sort::Set};
      case Language::Lmon:
        if (config_.set_quantifiers) return {Sort::Individual, Sort::Set};
        return {Sort::Individual};
      default: return {Sort::Individual};
    }
  }

  Variable bound_variable(Sort sort, std::size_t depth) const {
    const std::string d = std::to_string(depth);
    switch (sort) {
      case Sort::Urelement: return {"p" + d, sort};
      case Sort::Set: return {(config_.lang == Language::Lmon ? "X" : "x") + d, sort};
      case Sort::Individual: break;
    }
    return {"x" + d, sort};
  }

  void atoms(const std::vector<Variable>& scope, const Sink& sink) {
    if (config_.use_constants) {
      sink(Formula::truth());
      sink(Formula::falsity());
    }
    std::vector<Variable> ind, ur, set;
    for (const auto& v : scope) {
      (v.sort == Sort::Individual ? ind : v.sort == Sort::Urelement ? ur : set).push_back(v);
    }
    auto pairs = [&](const std::vector<Variable>& xs, const std::vector<Variable>& ys, Kind k) {
      for (const auto& a : xs) {
        for (const auto& b : ys) sink(Formula::atom(k, a, b));
      }
    };
    switch (config_.lang) {
      case Language::Lord:
        pairs(ind, ind, Kind::Less);
        pairs(ind, ind, Kind::Eq);
        break;
      case Language::Lmon:
        pairs(ind, ind, Kind::Less);
        pairs(ind, ind, Kind::Eq);
        pairs(ind, set, Kind::In);
        break;
      case Language::LbS:
        pairs(ind, ind, Kind::Subeq);
        pairs(ind, ind, Kind::Eq);
        for (const auto& a : ind) sink(Formula::atom(Kind::S, a));
        break;
      case Language::L1S:
        pairs(ur, ur, Kind::UrEq);
        pairs(ur, set, Kind::UrIn);
        for (const auto& a : set) sink(Formula::atom(Kind::S, a));
        break;
    }
  }

  const EnumerationConfig& config_;
};

}  // namespace

std::uint64_t enumerate_formulas(const EnumerationConfig& config, const Sink& emit) {
  Enumerator e(config);
  std::uint64_t count = 0;
  for (std::size_t size = 1; size <= config.max_size; ++size) {
    e.formulas(size, config.max_rank, config.scope, [&](const Formula& f) {
      ++count;
      emit(f);
    });
  }
  return count;
}

}  // namespace efw
