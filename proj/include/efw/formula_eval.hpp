#pragma once

// Model checking of formulas on explicit finite structures.

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "efw/formula.hpp"
#include "efw/structure.hpp"

namespace efw {

/// A finite structure prepared for one language: quantifier domains per
/// sort and dense relation tables.
///   lord, lmon: linear orders ("lt"); lmon set variables range over all
///     subsets (bitmasks) or over the cofinal ones.
///   lbs: algebras with "sub" and "S".
///   l1s: two-sorted structures with "ur", "in" and "S".
struct Model {
  Language lang = Language::Lord;
  std::size_t universe = 0;
  std::vector<std::uint64_t> individuals;
  std::vector<std::uint64_t> urelements;
  std::vector<std::uint64_t> sets;
  std::vector<std::uint8_t> lt;   // universe x universe
  std::vector<std::uint8_t> sub;
  std::vector<std::uint8_t> in;
  std::vector<std::uint8_t> small;
};

/// Throws SignatureMismatch when the structure lacks the language's relations.
Model make_model(const FiniteStructure& s, Language lang, bool cofinal_sets = false);

/// Values of free variables: element indices, or bitmasks for lmon sets.
using Assignment = std::map<std::string, std::uint64_t>;

/// Reusable evaluator. Quantifier nodes are memoized on the values of their
/// free variables, so deep formulas over small domains stay cheap.
class Evaluator {
 public:
  explicit Evaluator(Model model);

  /// Throws UnboundVariable, SignatureMismatch, InvalidInput.
  bool eval(const Formula& f, const Assignment& assignment = {});
  const Model& model() const { return model_; }

 private:
  struct Node {
    Kind kind;
    int a = -1, b = -1;  // slots
    int l = -1, r = -1;  // children
    int memo = -1;       // offset into memo_, -1 when not memoized
    int free_begin = 0, free_end = 0;
  };

  int compile(const Formula& f, std::vector<std::pair<std::string, int>>& scope, std::uint64_t& used);
  const std::vector<std::uint64_t>& domain(Sort s) const;
  bool run(int node);

  Model model_;
  std::vector<Node> nodes_;
  std::vector<int> free_slots_;
  std::vector<Sort> slot_sort_;
  std::vector<std::uint64_t> val_;
  std::vector<std::uint32_t> pos_;
  std::vector<std::int8_t> memo_;
  std::size_t memo_size_ = 0;
};

bool eval(const Formula& f, const FiniteStructure& s, Language lang, const Assignment& assignment = {},
          bool cofinal_sets = false);

/// Cofinal subsets of the n-element order as bitmasks: those containing the
/// maximum.
std::vector<std::uint64_t> cof_sets(std::size_t n);

}  // namespace efw
