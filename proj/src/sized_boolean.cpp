#include "efw/sized_boolean.hpp"

#include <algorithm>

#include <json.hpp>

#include "efw/error.hpp"

namespace efw {

namespace {

using Split = std::pair<SizeLabel, SizeLabel>;

std::string side_name(BaSide s) { return s == BaSide::Left ? "left" : "right"; }

std::string move_to_string(const SpoilerMove& move) {
  std::string out = side_name(move.side) + ":";
  for (std::size_t i = 0; i < move.choices.size(); ++i) {
    out += (i ? " " : "") + move.choices[i].to_string();
  }
  return out;
}

std::string choices_to_string(const std::vector<AtomChoice>& choices) {
  std::string out;
  for (std::size_t i = 0; i < choices.size(); ++i) out += (i ? " " : "") + choices[i].to_string();
  return out;
}

[[noreturn]] void breakdown(std::size_t atom, const SizeLabel& a, const SizeLabel& b,
                            const std::string& why) {
  throw StrategyBreakdown("atom " + std::to_string(atom) + " (" + a.to_string() + " vs " +
                          b.to_string() + "): " + why);
}

// Label answering an infinite small piece on a side without infinite small
// sets.
SizeLabel horizon_answer(unsigned h) { return SizeLabel::fin(std::uint64_t{1} << std::min(h, 62u)); }

Split answer_split(std::size_t atom, const SizeLabel& a, const SizeLabel& b, const AlgebraSpec& spec_b,
                   const Split& split, unsigned h) {
  const auto& [part, copart] = split;
  if (b.kind == SizeLabel::Kind::Large) {
    if (a.kind != SizeLabel::Kind::Large) breakdown(atom, a, b, "small atom matched with large");
    auto answer = [&](const SizeLabel& piece) {
      if (piece.kind == SizeLabel::Kind::InfSmall && !spec_b.inf_small_inhabited) {
        return horizon_answer(h);
      }
      return piece;
    };
    return {answer(part), answer(copart)};
  }
  if (b.is_fin()) {
    const std::uint64_t m = b.count;
    if (a.is_fin()) {
      if (a.count != m) breakdown(atom, a, b, "finite sizes differ");
      return split;
    }
    if (a.kind != SizeLabel::Kind::InfSmall) breakdown(atom, a, b, "large atom matched with finite");
    if (part.is_fin() && copart.kind == SizeLabel::Kind::InfSmall) {
      if (part.count >= m) breakdown(atom, a, b, "finite answer exhausted");
      return {part, SizeLabel::fin(m - part.count)};
    }
    if (copart.is_fin() && part.kind == SizeLabel::Kind::InfSmall) {
      if (copart.count >= m) breakdown(atom, a, b, "finite answer exhausted");
      return {SizeLabel::fin(m - copart.count), copart};
    }
    if (m < 2) breakdown(atom, a, b, "finite answer exhausted");
    return {SizeLabel::fin(m / 2), SizeLabel::fin(m - m / 2)};
  }
  // b is InfSmall
  if (a.kind == SizeLabel::Kind::InfSmall) return split;
  if (!a.is_fin()) breakdown(atom, a, b, "large atom matched with small");
  if (part.count <= copart.count) return {part, SizeLabel::inf_small()};
  return {SizeLabel::inf_small(), copart};
}

std::vector<std::size_t> splittable(const std::vector<AtomPair>& atoms, BaSide side) {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const SizeLabel& l = side == BaSide::Left ? atoms[i].left : atoms[i].right;
    if (!l.is_fin() || l.count >= 2) out.push_back(i);
  }
  return out;
}

std::size_t pick(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

}  // namespace

SizeLabel SizeLabel::fin(std::uint64_t n) {
  if (n == 0) throw InvalidInput("Fin label needs a positive size");
  return {Kind::Fin, n};
}

std::string SizeLabel::to_string() const {
  switch (kind) {
    case Kind::Fin: return "Fin:" + std::to_string(count);
    case Kind::InfSmall: return "InfSmall";
    case Kind::Large: return "Large";
  }
  return "?";
}

SizeLabel SizeLabel::parse(const std::string& text) {
  if (text == "InfSmall") return inf_small();
  if (text == "Large") return large();
  if (text.rfind("Fin:", 0) == 0) {
    try {
      std::size_t used = 0;
      const auto n = std::stoull(text.substr(4), &used);
      if (used == text.size() - 4) return fin(n);
    } catch (const std::logic_error&) {
    }
  }
  throw InvalidInput("bad size label " + text);
}

std::string AtomChoice::to_string() const {
  switch (kind) {
    case Kind::Inside: return "in";
    case Kind::Outside: return "out";
    case Kind::Split: return "(" + part.to_string() + "," + copart.to_string() + ")";
  }
  return "?";
}

AlgebraSpec load_algebra_spec(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\n");
  const std::string text =
      first != std::string::npos && spec[first] == '{' ? spec : read_text_file(spec);
  try {
    const auto doc = nlohmann::json::parse(text);
    return {doc.at("name").get<std::string>(), doc.at("inf_small_inhabited").get<bool>()};
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("malformed algebra spec: ") + e.what());
  }
}

bool is_legal_split(const SizeLabel& label, const AlgebraSpec& spec, const SizeLabel& part,
                    const SizeLabel& copart) {
  auto inhabited = [&](const SizeLabel& l) {
    return l.kind != SizeLabel::Kind::InfSmall || spec.inf_small_inhabited;
  };
  if (!inhabited(label) || !inhabited(part) || !inhabited(copart)) return false;
  switch (label.kind) {
    case SizeLabel::Kind::Fin:
      return part.is_fin() && copart.is_fin() && part.count + copart.count == label.count;
    case SizeLabel::Kind::InfSmall:
      return part.is_small() && copart.is_small() && (!part.is_fin() || !copart.is_fin());
    case SizeLabel::Kind::Large:
      return part.kind == SizeLabel::Kind::Large || copart.kind == SizeLabel::Kind::Large;
  }
  return false;
}

std::vector<Split> legal_splits(const SizeLabel& label, const AlgebraSpec& spec, std::uint64_t max_fin) {
  std::vector<Split> out;
  if (label.kind == SizeLabel::Kind::InfSmall && !spec.inf_small_inhabited) return out;
  if (label.is_fin()) {
    for (std::uint64_t i = 1; i < label.count; ++i) {
      out.emplace_back(SizeLabel::fin(i), SizeLabel::fin(label.count - i));
    }
    return out;
  }
  std::vector<SizeLabel> small;
  for (std::uint64_t i = 1; i <= max_fin; ++i) small.push_back(SizeLabel::fin(i));
  if (spec.inf_small_inhabited) small.push_back(SizeLabel::inf_small());
  if (label.kind == SizeLabel::Kind::InfSmall) {
    for (const auto& s : small) {
      if (s.is_fin()) {
        out.emplace_back(s, SizeLabel::inf_small());
        out.emplace_back(SizeLabel::inf_small(), s);
      }
    }
    out.emplace_back(SizeLabel::inf_small(), SizeLabel::inf_small());
    return out;
  }
  out.emplace_back(SizeLabel::large(), SizeLabel::large());
  for (const auto& s : small) {
    out.emplace_back(s, SizeLabel::large());
    out.emplace_back(SizeLabel::large(), s);
  }
  return out;
}

PartitionState initial_state(const AlgebraSpec& left, const AlgebraSpec& right,
                             std::optional<std::size_t> horizon) {
  PartitionState s;
  s.left_spec = left;
  s.right_spec = right;
  s.horizon = horizon;
  s.atoms.push_back({SizeLabel::large(), SizeLabel::large(), {}});
  return s;
}

PartitionState finite_initial_state(std::uint64_t n, std::optional<std::size_t> horizon) {
  PartitionState s;
  s.left_spec = {"finite", false};
  s.right_spec = {"finite", false};
  s.horizon = horizon;
  s.finite_ground = true;
  s.atoms.push_back({SizeLabel::fin(n), SizeLabel::fin(n), {}});
  return s;
}

DuplicatorResponse duplicator_respond(const PartitionState& state, const SpoilerMove& move,
                                      unsigned cap) {
  if (state.horizon && state.round >= *state.horizon) throw IllegalMove("the game is over");
  if (move.choices.size() != state.atoms.size()) {
    throw IllegalMove("move describes " + std::to_string(move.choices.size()) + " atoms, state has " +
                      std::to_string(state.atoms.size()));
  }
  const bool left = move.side == BaSide::Left;
  const AlgebraSpec& spec_a = left ? state.left_spec : state.right_spec;
  const AlgebraSpec& spec_b = left ? state.right_spec : state.left_spec;
  std::size_t h = state.horizon ? *state.horizon - state.round - 1 : cap;
  const unsigned h_bits = static_cast<unsigned>(std::min<std::size_t>(h, 62));

  DuplicatorResponse out;
  out.state = state;
  out.state.atoms.clear();
  for (std::size_t i = 0; i < state.atoms.size(); ++i) {
    const AtomPair& ap = state.atoms[i];
    const SizeLabel& a = left ? ap.left : ap.right;
    const SizeLabel& b = left ? ap.right : ap.left;
    const AtomChoice& c = move.choices[i];
    if (c.kind != AtomChoice::Kind::Split) {
      out.choices.push_back(c);
      AtomPair next = ap;
      next.membership.push_back(c.kind == AtomChoice::Kind::Inside);
      out.state.atoms.push_back(std::move(next));
      continue;
    }
    if (!is_legal_split(a, spec_a, c.part, c.copart)) {
      throw IllegalMove("atom " + std::to_string(i) + ": " + a.to_string() + " cannot split into " +
                        c.to_string());
    }
    const Split answer = answer_split(i, a, b, spec_b, {c.part, c.copart}, h_bits);
    out.choices.push_back(AtomChoice::split(answer.first, answer.second));
    AtomPair part = ap;
    AtomPair copart = ap;
    part.membership.push_back(true);
    copart.membership.push_back(false);
    (left ? part.left : part.right) = c.part;
    (left ? part.right : part.left) = answer.first;
    (left ? copart.left : copart.right) = c.copart;
    (left ? copart.right : copart.left) = answer.second;
    out.state.atoms.push_back(std::move(part));
    out.state.atoms.push_back(std::move(copart));
  }
  out.state.round = state.round + 1;
  out.state.history.push_back(move_to_string(move) + " => " + choices_to_string(out.choices));
  return out;
}

std::vector<std::string> state_violations(const PartitionState& state) {
  std::vector<std::string> out;
  bool large_pair = false;
  for (std::size_t i = 0; i < state.atoms.size(); ++i) {
    const AtomPair& ap = state.atoms[i];
    const std::string where = "atom " + std::to_string(i) + " (" + ap.left.to_string() + ", " +
                              ap.right.to_string() + "): ";
    if (ap.left.is_small() != ap.right.is_small()) out.push_back(where + "condition (*) fails");
    if (ap.left.kind == SizeLabel::Kind::InfSmall && !state.left_spec.inf_small_inhabited) {
      out.push_back(where + "left algebra has no infinite small sets");
    }
    if (ap.right.kind == SizeLabel::Kind::InfSmall && !state.right_spec.inf_small_inhabited) {
      out.push_back(where + "right algebra has no infinite small sets");
    }
    if (ap.left.is_fin() && ap.right.is_fin() && ap.left.count != ap.right.count) {
      out.push_back(where + "finite sizes differ");
    }
    if (ap.left.is_fin() && ap.right.kind == SizeLabel::Kind::InfSmall &&
        state.left_spec.inf_small_inhabited) {
      out.push_back(where + "finite left matched with infinite right");
    }
    if (ap.right.is_fin() && ap.left.kind == SizeLabel::Kind::InfSmall &&
        state.right_spec.inf_small_inhabited) {
      out.push_back(where + "finite right matched with infinite left");
    }
    if (state.finite_ground && (!ap.left.is_fin() || !ap.right.is_fin())) {
      out.push_back(where + "finite ground carries an infinite label");
    }
    if (ap.membership.size() != state.round) out.push_back(where + "membership length mismatch");
    if (ap.left.kind == SizeLabel::Kind::Large && ap.right.kind == SizeLabel::Kind::Large) {
      large_pair = true;
    }
  }
  if (!state.finite_ground && !large_pair) out.push_back("no (Large, Large) atom");
  if (state.atoms.empty()) out.push_back("empty partition");
  return out;
}

bool verify_state(const PartitionState& state) { return state_violations(state).empty(); }

std::string state_to_json(const PartitionState& state) {
  nlohmann::ordered_json j;
  j["round"] = state.round;
  nlohmann::ordered_json atoms = nlohmann::ordered_json::array();
  for (const auto& ap : state.atoms) {
    std::string trace;
    for (bool b : ap.membership) trace += b ? '1' : '0';
    atoms.push_back({ap.left.to_string(), ap.right.to_string(), trace});
  }
  j["atoms"] = atoms;
  j["verified"] = verify_state(state);
  return j.dump();
}

Adversary parse_adversary(const std::string& name) {
  if (name == "random") return Adversary::Random;
  if (name == "extract") return Adversary::Extract;
  if (name == "finite-random") return Adversary::FiniteRandom;
  throw InvalidInput("unknown adversary " + name + " (random, extract, finite-random)");
}

SpoilerMove adversary_move(Adversary kind, const PartitionState& state, std::mt19937_64& rng) {
  SpoilerMove move;
  const std::size_t n = state.atoms.size();
  if (kind == Adversary::Extract) {
    move.side = BaSide::Right;
    move.choices.assign(n, AtomChoice::outside());
    const AlgebraSpec& spec = state.right_spec;
    for (std::size_t i = 0; i < n; ++i) {
      if (state.atoms[i].right.kind == SizeLabel::Kind::InfSmall) {
        move.choices[i] = AtomChoice::split(SizeLabel::fin(1), SizeLabel::inf_small());
        return move;
      }
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (state.atoms[i].right.kind == SizeLabel::Kind::Large) {
        const SizeLabel piece = spec.inf_small_inhabited ? SizeLabel::inf_small() : SizeLabel::fin(1);
        move.choices[i] = AtomChoice::split(piece, SizeLabel::large());
        return move;
      }
    }
    return move;
  }

  move.side = pick(rng, 2) == 0 ? BaSide::Left : BaSide::Right;
  const AlgebraSpec& spec = move.side == BaSide::Left ? state.left_spec : state.right_spec;
  for (std::size_t i = 0; i < n; ++i) {
    move.choices.push_back(pick(rng, 2) == 0 ? AtomChoice::inside() : AtomChoice::outside());
  }
  // At most two splits per round.
  auto candidates = splittable(state.atoms, move.side);
  const std::size_t splits = std::min<std::size_t>(candidates.size(), pick(rng, 3));
  for (std::size_t k = 0; k < splits; ++k) {
    const std::size_t j = pick(rng, candidates.size());
    const std::size_t i = candidates[j];
    candidates.erase(candidates.begin() + static_cast<std::ptrdiff_t>(j));
    const AtomPair& ap = state.atoms[i];
    const auto options = legal_splits(move.side == BaSide::Left ? ap.left : ap.right, spec);
    if (options.empty()) continue;
    const auto& [part, copart] = options[pick(rng, options.size())];
    move.choices[i] = AtomChoice::split(part, copart);
  }
  return move;
}

bool AdversarialRun::all_verified() const {
  return std::all_of(records.begin(), records.end(), [](const RoundRecord& r) { return r.verified; });
}

AdversarialRun run_adversarial(const RunConfig& config) {
  const std::optional<std::size_t> horizon =
      config.unbounded ? std::nullopt : std::optional<std::size_t>(config.rounds);
  PartitionState state = config.adversary == Adversary::FiniteRandom
                             ? finite_initial_state(config.finite_size, horizon)
                             : initial_state(config.left, config.right, horizon);
  std::mt19937_64 rng(config.seed);
  AdversarialRun run;
  auto record = [&run](const PartitionState& s, std::string move, std::string response) {
    RoundRecord r;
    r.round = s.round;
    r.move = std::move(move);
    r.response = std::move(response);
    r.state = s;
    r.violations = state_violations(s);
    r.verified = r.violations.empty();
    run.records.push_back(std::move(r));
  };
  record(state, "", "");
  for (std::size_t k = 0; k < config.rounds; ++k) {
    const SpoilerMove move = adversary_move(config.adversary, state, rng);
    try {
      auto response = duplicator_respond(state, move, config.cap);
      state = std::move(response.state);
      record(state, move_to_string(move), choices_to_string(response.choices));
    } catch (const StrategyBreakdown& e) {
      run.breakdown = "round " + std::to_string(state.round + 1) + ": " + e.what();
      break;
    }
  }
  return run;
}

Concretization concretize(const PartitionState& state, std::optional<unsigned> t) {
  if (auto v = state_violations(state); !v.empty()) throw InvalidInput(v.front());
  std::uint64_t total = 0;
  for (const auto& ap : state.atoms) {
    if (!ap.left.is_fin() || !ap.right.is_fin()) {
      throw InvalidInput("concretization needs Fin labels only, found " + ap.left.to_string());
    }
    total += ap.left.count;
  }
  if (total > 12) throw InvalidInput("concretization limited to 12 ground elements");
  const auto n = static_cast<unsigned>(total);
  const unsigned threshold = t.value_or((n + 1) / 2);
  Concretization out{powerset_algebra(n, threshold), powerset_algebra(n, threshold), {}};

  // Left places blocks in atom order, right in reverse order.
  std::vector<std::size_t> left_block(state.atoms.size()), right_block(state.atoms.size());
  std::size_t offset = 0;
  for (std::size_t i = 0; i < state.atoms.size(); ++i) {
    const auto size = state.atoms[i].left.count;
    left_block[i] = ((std::size_t{1} << size) - 1) << offset;
    offset += size;
  }
  offset = 0;
  for (std::size_t i = state.atoms.size(); i-- > 0;) {
    const auto size = state.atoms[i].right.count;
    right_block[i] = ((std::size_t{1} << size) - 1) << offset;
    offset += size;
  }
  for (std::size_t i = 0; i < state.atoms.size(); ++i) out.pairs.emplace_back(left_block[i], right_block[i]);
  for (std::size_t k = 0; k < state.round; ++k) {
    std::size_t l = 0, r = 0;
    for (std::size_t i = 0; i < state.atoms.size(); ++i) {
      if (state.atoms[i].membership[k]) {
        l |= left_block[i];
        r |= right_block[i];
      }
    }
    out.pairs.emplace_back(l, r);
  }
  return out;
}

}  // namespace efw
