#pragma once

// Symbolic EF arena for a powerset algebra with a small-sets ideal against
// the class-side algebra with the ideal of sets. Each side is a partition
// into atoms carrying size labels; player II answers every split atom by
// atom.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "efw/ef_engine.hpp"
#include "efw/structure.hpp"

namespace efw {

struct SizeLabel {
  enum class Kind { Fin, InfSmall, Large };
  Kind kind = Kind::Large;
  std::uint64_t count = 0;  // Fin only, >= 1

  static SizeLabel fin(std::uint64_t n);
  static SizeLabel inf_small() { return {Kind::InfSmall, 0}; }
  static SizeLabel large() { return {Kind::Large, 0}; }

  bool is_fin() const { return kind == Kind::Fin; }
  bool is_small() const { return kind != Kind::Large; }
  /// "Fin:3", "InfSmall", "Large".
  std::string to_string() const;
  static SizeLabel parse(const std::string& text);

  friend bool operator==(const SizeLabel&, const SizeLabel&) = default;
};

struct AlgebraSpec {
  std::string name;
  bool inf_small_inhabited = true;
};

/// `{"name":"P(kappa)","inf_small_inhabited":true}` text or a file path.
AlgebraSpec load_algebra_spec(const std::string& spec);

struct AtomPair {
  SizeLabel left;
  SizeLabel right;
  std::vector<bool> membership;  // inside the element played at each round
};

struct PartitionState {
  AlgebraSpec left_spec;
  AlgebraSpec right_spec;
  std::vector<AtomPair> atoms;
  std::size_t round = 0;
  std::optional<std::size_t> horizon;  // nullopt: unbounded play
  /// Test configuration: finite ground sets on both sides, all labels Fin.
  bool finite_ground = false;
  std::vector<std::string> history;
};

enum class BaSide { Left, Right };

struct AtomChoice {
  enum class Kind { Inside, Outside, Split };
  Kind kind = Kind::Outside;
  SizeLabel part;    // Split only: the piece inside the chosen element
  SizeLabel copart;  // Split only

  static AtomChoice inside() { return {Kind::Inside, {}, {}}; }
  static AtomChoice outside() { return {Kind::Outside, {}, {}}; }
  static AtomChoice split(SizeLabel p, SizeLabel c) { return {Kind::Split, p, c}; }
  std::string to_string() const;
};

struct SpoilerMove {
  BaSide side = BaSide::Left;
  std::vector<AtomChoice> choices;  // one per current atom
};

/// Whether `label` may split into (part, copart) on an algebra with `spec`.
bool is_legal_split(const SizeLabel& label, const AlgebraSpec& spec, const SizeLabel& part,
                    const SizeLabel& copart);

/// Legal splits with Fin pieces of size <= max_fin for the infinite labels.
std::vector<std::pair<SizeLabel, SizeLabel>> legal_splits(const SizeLabel& label,
                                                          const AlgebraSpec& spec,
                                                          std::uint64_t max_fin = 3);

PartitionState initial_state(const AlgebraSpec& left, const AlgebraSpec& right,
                             std::optional<std::size_t> horizon);
/// Single (Fin(n), Fin(n)) atom on finite ground sets.
PartitionState finite_initial_state(std::uint64_t n, std::optional<std::size_t> horizon);

struct DuplicatorResponse {
  std::vector<AtomChoice> choices;
  PartitionState state;
};

/// Player II's answer. `cap` sizes the finite answer to an infinite small
/// piece in unbounded play. Throws IllegalMove or StrategyBreakdown.
DuplicatorResponse duplicator_respond(const PartitionState& state, const SpoilerMove& move,
                                      unsigned cap = 20);

std::vector<std::string> state_violations(const PartitionState& state);
bool verify_state(const PartitionState& state);

std::string state_to_json(const PartitionState& state);

enum class Adversary { Random, Extract, FiniteRandom };
Adversary parse_adversary(const std::string& name);

SpoilerMove adversary_move(Adversary kind, const PartitionState& state, std::mt19937_64& rng);

struct RoundRecord {
  std::size_t round = 0;
  std::string move;
  std::string response;
  PartitionState state;
  bool verified = false;
  std::vector<std::string> violations;
};

struct AdversarialRun {
  std::vector<RoundRecord> records;  // records[0] is the initial state
  std::optional<std::string> breakdown;
  bool all_verified() const;
};

struct RunConfig {
  AlgebraSpec left;
  AlgebraSpec right;
  std::size_t rounds = 25;
  Adversary adversary = Adversary::Random;
  std::uint64_t seed = 0;
  bool unbounded = false;
  unsigned cap = 20;
  std::uint64_t finite_size = 6;  // FiniteRandom ground size
};

/// Plays `rounds` rounds; a strategy breakdown ends the run and is
/// recorded rather than thrown.
AdversarialRun run_adversarial(const RunConfig& config);

struct Concretization {
  FiniteStructure left;
  FiniteStructure right;
  Pairing pairs;  // atom blocks, then the element of each round
};

/// Explicit powerset algebras over N = total atom size with ideal of sets
/// of size < t (default (N+1)/2). Requires an all-Fin, verified state.
Concretization concretize(const PartitionState& state, std::optional<unsigned> t = std::nullopt);

}  // namespace efw
