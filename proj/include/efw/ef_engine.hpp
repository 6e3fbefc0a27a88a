#pragma once

// Ehrenfeucht-Fraisse games on finite structures, decided by memoized
// minimax. Player I (Spoiler) picks a side and an element each round,
// player II (Duplicator) answers on the other side.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "efw/structure.hpp"

namespace efw {

using Pairing = std::vector<std::pair<std::size_t, std::size_t>>;

enum class Side { M, N };

struct Move {
  Side side = Side::M;
  std::size_t element = 0;

  friend bool operator==(const Move&, const Move&) = default;
};

/// Injective both ways, preserves and reflects every relation.
bool is_partial_embedding(const FiniteStructure& m, const FiniteStructure& n, const Pairing& pairs);

/// Whether `pairs + extra` is a partial embedding, assuming `pairs` is one.
bool extends_embedding(const FiniteStructure& m, const FiniteStructure& n, const Pairing& pairs,
                       std::pair<std::size_t, std::size_t> extra);

struct GameResult {
  bool duplicator_wins = true;
  std::optional<Move> witness;  // first winning Spoiler move
  std::uint64_t nodes = 0;
};

constexpr std::uint64_t kDefaultNodeBudget = 10'000'000;

/// Exact winner of the `rounds`-round game from `start` (default: empty).
/// Throws SignatureMismatch or BudgetExceeded.
GameResult who_wins(const FiniteStructure& m, const FiniteStructure& n, std::size_t rounds,
                    std::uint64_t budget = kDefaultNodeBudget, const Pairing& start = {});

/// Least r <= max_rounds where Spoiler wins, nullopt when indistinguishable.
std::optional<std::size_t> ef_rank_distinguishing(const FiniteStructure& m, const FiniteStructure& n,
                                                  std::size_t max_rounds,
                                                  std::uint64_t budget = kDefaultNodeBudget);

struct Play {
  Pairing pairs;
  std::optional<Move> pending;                // Spoiler's move awaiting an answer
  std::optional<std::size_t> total_rounds;    // nullopt: unbounded
  std::vector<std::string> transcript;        // one JSON object per half-move

  bool spoiler_to_move() const { return !pending; }
  bool finished() const { return total_rounds && !pending && pairs.size() >= *total_rounds; }
  std::optional<std::size_t> rounds_remaining() const;
};

/// Applies a Spoiler move (no pending move) or a Duplicator answer (pending
/// move present, answer on the opposite side). Throws IllegalMove.
Play step_game(const FiniteStructure& m, const FiniteStructure& n, const Play& play, const Move& move);

/// Duplicator's automatic answer to the pending move: lowest element that
/// still wins the remaining game, else the lowest keeping an embedding,
/// else the lowest element.
Move duplicator_reply(const FiniteStructure& m, const FiniteStructure& n, const Play& play,
                      std::uint64_t budget = kDefaultNodeBudget);

}  // namespace efw
