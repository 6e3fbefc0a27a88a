#include "efw/ef_engine.hpp"

#include <algorithm>
#include <unordered_map>

#include <json.hpp>

#include "efw/error.hpp"

namespace efw {

namespace {

// All tuples over pairs-indices of the given arity; checks R_M(a) == R_N(b).
// When `must_use` is set only tuples touching that index are checked.
bool relation_agrees(const FiniteStructure& m, const FiniteStructure& n, std::size_t rm,
                     std::size_t rn, unsigned arity, const Pairing& pairs,
                     std::optional<std::size_t> must_use) {
  if (arity == 0) return m.holds(rm, nullptr) == n.holds(rn, nullptr);
  const std::size_t k = pairs.size();
  if (k == 0) return true;
  std::vector<std::size_t> idx(arity, 0);
  std::vector<std::size_t> ta(arity), tb(arity);
  while (true) {
    bool touches = !must_use;
    for (unsigned i = 0; i < arity; ++i) {
      ta[i] = pairs[idx[i]].first;
      tb[i] = pairs[idx[i]].second;
      if (must_use && idx[i] == *must_use) touches = true;
    }
    if (touches && m.holds(rm, ta.data()) != n.holds(rn, tb.data())) return false;
    unsigned pos = 0;
    while (pos < arity && ++idx[pos] == k) idx[pos++] = 0;
    if (pos == arity) return true;
  }
}

bool check(const FiniteStructure& m, const FiniteStructure& n, const Pairing& pairs,
           std::optional<std::size_t> must_use) {
  for (std::size_t i = 0; i < m.relations().size(); ++i) {
    const Relation& r = m.relations()[i];
    const auto j = n.find_relation(r.name);
    if (!j) throw SignatureMismatch("relation " + r.name + " missing on the right");
    if (!relation_agrees(m, n, i, *j, r.arity, pairs, must_use)) return false;
  }
  return true;
}

class Solver {
 public:
  Solver(const FiniteStructure& m, const FiniteStructure& n, std::uint64_t budget)
      : m_(m), n_(n), budget_(budget) {}

  // True when Duplicator wins from `pairs` (already an embedding).
  bool duplicator_wins(Pairing& pairs, std::size_t rounds, std::optional<Move>* witness) {
    if (rounds == 0) return true;
    if (++nodes_ > budget_) {
      throw BudgetExceeded("game search exceeded " + std::to_string(budget_) + " nodes");
    }
    const std::string key = memo_key(pairs, rounds);
    if (!witness) {
      if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    }
    bool result = true;
    const std::size_t limit = std::max(m_.universe_size(), n_.universe_size());
    for (std::size_t e = 0; e < limit && result; ++e) {
      for (Side side : {Side::M, Side::N}) {
        const std::size_t size = side == Side::M ? m_.universe_size() : n_.universe_size();
        if (e >= size) continue;
        if (!has_answer(pairs, rounds, {side, e})) {
          result = false;
          if (witness) *witness = Move{side, e};
          break;
        }
      }
    }
    memo_.emplace(key, result);
    return result;
  }

  bool has_answer(Pairing& pairs, std::size_t rounds, Move move) {
    const std::size_t other = move.side == Side::M ? n_.universe_size() : m_.universe_size();
    for (std::size_t r = 0; r < other; ++r) {
      if (answer_wins(pairs, rounds, move, r)) return true;
    }
    return false;
  }

  bool answer_wins(Pairing& pairs, std::size_t rounds, Move move, std::size_t answer) {
    const auto extra = move.side == Side::M ? std::make_pair(move.element, answer)
                                            : std::make_pair(answer, move.element);
    if (!extends_embedding(m_, n_, pairs, extra)) return false;
    pairs.push_back(extra);
    const bool ok = duplicator_wins(pairs, rounds - 1, nullptr);
    pairs.pop_back();
    return ok;
  }

  std::uint64_t nodes() const { return nodes_; }

 private:
  static std::string memo_key(const Pairing& pairs, std::size_t rounds) {
    std::vector<std::pair<std::size_t, std::size_t>> sorted(pairs.begin(), pairs.end());
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    std::string key;
    key.reserve(8 * sorted.size() + 4);
    auto put = [&key](std::uint32_t v) { key.append(reinterpret_cast<const char*>(&v), sizeof v); };
    put(static_cast<std::uint32_t>(rounds));
    for (const auto& [a, b] : sorted) {
      put(static_cast<std::uint32_t>(a));
      put(static_cast<std::uint32_t>(b));
    }
    return key;
  }

  const FiniteStructure& m_;
  const FiniteStructure& n_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::unordered_map<std::string, bool> memo_;
};

void require_signature(const FiniteStructure& m, const FiniteStructure& n) {
  if (!m.same_signature(n)) throw SignatureMismatch("structures have different signatures");
}

std::string transcript_line(std::size_t round, Side side, bool spoiler, std::size_t element) {
  nlohmann::ordered_json j;
  j["round"] = round;
  j["side"] = side == Side::M ? "M" : "N";
  j["player"] = spoiler ? "I" : "II";
  j["element"] = element;
  return j.dump();
}

}  // namespace

bool is_partial_embedding(const FiniteStructure& m, const FiniteStructure& n, const Pairing& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (pairs[i].first >= m.universe_size() || pairs[i].second >= n.universe_size()) return false;
    for (std::size_t j = 0; j < i; ++j) {
      if ((pairs[i].first == pairs[j].first) != (pairs[i].second == pairs[j].second)) return false;
    }
  }
  return check(m, n, pairs, std::nullopt);
}

bool extends_embedding(const FiniteStructure& m, const FiniteStructure& n, const Pairing& pairs,
                       std::pair<std::size_t, std::size_t> extra) {
  for (const auto& p : pairs) {
    if ((p.first == extra.first) != (p.second == extra.second)) return false;
  }
  Pairing extended = pairs;
  extended.push_back(extra);
  return check(m, n, extended, extended.size() - 1);
}

GameResult who_wins(const FiniteStructure& m, const FiniteStructure& n, std::size_t rounds,
                    std::uint64_t budget, const Pairing& start) {
  require_signature(m, n);
  GameResult out;
  if (!is_partial_embedding(m, n, start)) {
    out.duplicator_wins = false;
    return out;
  }
  Solver solver(m, n, budget);
  Pairing pairs = start;
  std::optional<Move> witness;
  out.duplicator_wins = solver.duplicator_wins(pairs, rounds, &witness);
  out.witness = witness;
  out.nodes = solver.nodes();
  return out;
}

std::optional<std::size_t> ef_rank_distinguishing(const FiniteStructure& m, const FiniteStructure& n,
                                                  std::size_t max_rounds, std::uint64_t budget) {
  for (std::size_t r = 0; r <= max_rounds; ++r) {
    if (!who_wins(m, n, r, budget).duplicator_wins) return r;
  }
  return std::nullopt;
}

std::optional<std::size_t> Play::rounds_remaining() const {
  if (!total_rounds) return std::nullopt;
  return *total_rounds > pairs.size() ? *total_rounds - pairs.size() : 0;
}

Play step_game(const FiniteStructure& m, const FiniteStructure& n, const Play& play, const Move& move) {
  if (play.finished()) throw IllegalMove("the game is over");
  const std::size_t size = move.side == Side::M ? m.universe_size() : n.universe_size();
  if (move.element >= size) {
    throw IllegalMove("element " + std::to_string(move.element) + " is outside side " +
                      (move.side == Side::M ? "M" : "N") + " of size " + std::to_string(size));
  }
  Play next = play;
  const std::size_t round = play.pairs.size() + 1;
  if (!play.pending) {
    next.pending = move;
    next.transcript.push_back(transcript_line(round, move.side, true, move.element));
    return next;
  }
  if (move.side == play.pending->side) {
    throw IllegalMove("player II must answer on the side opposite to player I");
  }
  next.pairs.push_back(move.side == Side::N ? std::make_pair(play.pending->element, move.element)
                                            : std::make_pair(move.element, play.pending->element));
  next.pending.reset();
  next.transcript.push_back(transcript_line(round, move.side, false, move.element));
  return next;
}

Move duplicator_reply(const FiniteStructure& m, const FiniteStructure& n, const Play& play,
                      std::uint64_t budget) {
  if (!play.pending) throw IllegalMove("no pending move to answer");
  require_signature(m, n);
  const Side side = play.pending->side == Side::M ? Side::N : Side::M;
  const std::size_t size = side == Side::M ? m.universe_size() : n.universe_size();
  if (size == 0) throw IllegalMove("the answering side is empty");
  const auto remaining = play.rounds_remaining();
  const bool embedded = is_partial_embedding(m, n, play.pairs);
  if (embedded && remaining) {
    Solver solver(m, n, budget);
    Pairing pairs = play.pairs;
    for (std::size_t r = 0; r < size; ++r) {
      if (solver.answer_wins(pairs, *remaining, *play.pending, r)) return {side, r};
    }
  }
  if (embedded) {
    for (std::size_t r = 0; r < size; ++r) {
      const auto extra = side == Side::N ? std::make_pair(play.pending->element, r)
                                         : std::make_pair(r, play.pending->element);
      if (extends_embedding(m, n, play.pairs, extra)) return {side, r};
    }
  }
  return {side, 0};
}

}  // namespace efw
