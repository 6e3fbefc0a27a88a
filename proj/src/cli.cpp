#include "efw/cli.hpp"

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "efw/ef_engine.hpp"
#include "efw/error.hpp"
#include "efw/formula.hpp"
#include "efw/formula_eval.hpp"
#include "efw/ordinal.hpp"
#include "efw/preorder.hpp"
#include "efw/sized_boolean.hpp"
#include "efw/structure.hpp"

namespace efw::cli {

namespace {

using json = nlohmann::ordered_json;

constexpr const char* kDefaultAlgebra = R"js({"name":"P(kappa)","inf_small_inhabited":true})js";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string inline_or_file(const std::string& spec) {
  const auto first = spec.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && spec[first] == '{') return spec;
  return read_text_file(spec);
}

json parsed(const std::string& text) { return json::parse(text); }

std::string cmp_symbol(std::strong_ordering c) {
  if (c == std::strong_ordering::less) return "<";
  if (c == std::strong_ordering::greater) return ">";
  return "=";
}

json preorder_value(const Preorder& p) { return parsed(preorder_to_json(p)); }

json optional_preorder(const std::optional<Preorder>& p) { return p ? preorder_value(*p) : json(nullptr); }

void save_transcript(const std::string& path, const std::vector<std::string>& lines, std::ostream& out) {
  if (path.empty()) {
    out << "transcript:\n";
    for (const auto& l : lines) out << l << "\n";
    return;
  }
  std::ofstream file(path);
  if (!file) throw InvalidInput("cannot write transcript " + path);
  for (const auto& l : lines) file << l << "\n";
  out << "transcript saved to " << path << "\n";
}

std::vector<std::string> words(const std::string& line) {
  std::istringstream is(line);
  std::vector<std::string> out;
  for (std::string w; is >> w;) out.push_back(w);
  return out;
}

// ------------------------------------------------------------- ordinal

struct OrdinalArgs {
  std::string op;
  std::vector<std::string> exprs;
};

json ordinal_command(const OrdinalArgs& a) {
  const std::size_t need = a.op == "decomp" ? 1 : 2;
  if (a.exprs.size() != need) {
    throw UsageError("ordinal " + a.op + " takes " + std::to_string(need) + " expression(s)");
  }
  const Ordinal x = parse_ordinal(a.exprs[0]);
  if (a.op == "decomp") {
    const auto d = decompose_mod_omega_omega(x);
    return {{"quotient", d.quotient.to_string()}, {"remainder", d.remainder.to_string()}};
  }
  const Ordinal y = parse_ordinal(a.exprs[1]);
  if (a.op == "add") return {{"result", add(x, y).to_string()}};
  if (a.op == "mul") return {{"result", mul(x, y).to_string()}};
  if (a.op == "cmp") return {{"cmp", cmp_symbol(compare(x, y))}};
  const auto w = congruent_mod_omega_omega(x, y);
  json out{{"equivalent", w.has_value()}};
  out["witness"] = w ? json{{"xi", w->xi.to_string()}, {"eta", w->eta.to_string()}, {"delta", w->delta.to_string()}}
                     : json(nullptr);
  return out;
}

// ---------------------------------------------------------------- game

struct GameArgs {
  std::string op;
  std::string left, right;
  std::size_t rounds = 0;
  bool rounds_set = false;
  std::uint64_t budget = kDefaultNodeBudget;
  std::string transcript;
};

const char* side_name(Side s) { return s == Side::M ? "M" : "N"; }

void game_repl(const GameArgs& a, const FiniteStructure& m, const FiniteStructure& n, std::istream& in,
               std::ostream& out) {
  Play play;
  play.total_rounds = a.rounds;
  out << "EF game, " << a.rounds << " rounds; M has " << m.universe_size() << " elements, N has "
      << n.universe_size() << ".\n"
      << "You are player I. Enter 'M <element>' or 'N <element>', or 'quit'.\n";
  while (!play.finished()) {
    out << "round " << play.pairs.size() + 1 << "> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) break;
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "quit" || w[0] == "exit") break;
    if (w.size() != 2 || (w[0] != "M" && w[0] != "N")) {
      out << "expected 'M <element>' or 'N <element>'\n";
      continue;
    }
    Move move{w[0] == "M" ? Side::M : Side::N, 0};
    try {
      std::size_t used = 0;
      move.element = std::stoull(w[1], &used);
      if (used != w[1].size()) throw std::invalid_argument(w[1]);
    } catch (const std::logic_error&) {
      out << "element must be a natural number\n";
      continue;
    }
    try {
      play = step_game(m, n, play, move);
    } catch (const IllegalMove& e) {
      out << "illegal move: " << e.what() << "\n";
      continue;
    }
    const Move reply = duplicator_reply(m, n, play, a.budget);
    play = step_game(m, n, play, reply);
    const bool ok = is_partial_embedding(m, n, play.pairs);
    out << "player II answers " << side_name(reply.side) << " " << reply.element
        << "; partial embedding: " << (ok ? "yes" : "no") << "\n";
  }
  if (play.finished()) {
    const bool ok = is_partial_embedding(m, n, play.pairs);
    out << (ok ? "duplicator survives" : "spoiler wins") << "\n";
  }
  save_transcript(a.transcript, play.transcript, out);
}

json game_command(const GameArgs& a, std::istream& in, std::ostream& out, bool& printed) {
  if (!a.rounds_set) throw UsageError("--rounds is required");
  const FiniteStructure m = load_structure(a.left);
  const FiniteStructure n = load_structure(a.right);
  if (a.op == "solve") {
    const auto r = who_wins(m, n, a.rounds, a.budget);
    json result{{"winner", r.duplicator_wins ? "duplicator" : "spoiler"}};
    if (r.duplicator_wins) {
      result["rank"] = nullptr;
    } else {
      result["rank"] = *ef_rank_distinguishing(m, n, a.rounds, a.budget);
    }
    return result;
  }
  if (a.op == "rank") {
    const auto k = ef_rank_distinguishing(m, n, a.rounds, a.budget);
    json result{{"max_rounds", a.rounds}};
    result["rank"] = k ? json(*k) : json(nullptr);
    return result;
  }
  game_repl(a, m, n, in, out);
  printed = true;
  return nullptr;
}

// -------------------------------------------------------------- bagame

struct BagameArgs {
  std::string op;
  std::string left_spec = kDefaultAlgebra, right_spec = kDefaultAlgebra;
  std::size_t rounds = 25;
  std::string adversary = "random";
  std::optional<std::uint64_t> seed;
  bool unbounded = false;
  unsigned cap = 20;
  std::uint64_t finite_size = 6;
  std::string transcript;
};

json record_json(const RoundRecord& r) {
  json j = parsed(state_to_json(r.state));
  json out{{"round", r.round}, {"move", r.move}, {"response", r.response}};
  out["atoms"] = j["atoms"];
  out["verified"] = r.verified;
  if (!r.violations.empty()) out["violations"] = r.violations;
  return out;
}

AtomChoice parse_choice(const std::string& w) {
  if (w == "in") return AtomChoice::inside();
  if (w == "out") return AtomChoice::outside();
  const auto slash = w.find('/');
  if (slash == std::string::npos) throw InvalidInput("choice " + w + " is not in, out or <part>/<copart>");
  return AtomChoice::split(SizeLabel::parse(w.substr(0, slash)), SizeLabel::parse(w.substr(slash + 1)));
}

void print_state(const PartitionState& s, std::ostream& out) {
  out << "atoms after round " << s.round << ":\n";
  for (std::size_t i = 0; i < s.atoms.size(); ++i) {
    out << "  " << i << ": " << s.atoms[i].left.to_string() << " | " << s.atoms[i].right.to_string() << "\n";
  }
}

void bagame_repl(const BagameArgs& a, std::istream& in, std::ostream& out) {
  PartitionState state = initial_state(load_algebra_spec(a.left_spec), load_algebra_spec(a.right_spec),
                                       a.unbounded ? std::nullopt : std::optional<std::size_t>(a.rounds));
  std::vector<std::string> lines{state_to_json(state)};
  out << "Boolean algebra game: " << state.left_spec.name << " vs " << state.right_spec.name << ", "
      << (a.unbounded ? std::string("unbounded") : std::to_string(a.rounds) + " rounds") << ".\n"
      << "Enter 'L' or 'R' followed by one choice per atom: in, out, or <part>/<copart> with labels\n"
      << "Fin:n, InfSmall, Large. 'quit' ends the session.\n";
  print_state(state, out);
  while (a.unbounded || state.round < a.rounds) {
    out << "round " << state.round + 1 << "> " << std::flush;
    std::string line;
    if (!std::getline(in, line)) break;
    const auto w = words(line);
    if (w.empty()) continue;
    if (w[0] == "quit" || w[0] == "exit") break;
    if ((w[0] != "L" && w[0] != "R") || w.size() != state.atoms.size() + 1) {
      out << "expected L or R and " << state.atoms.size() << " choice(s)\n";
      continue;
    }
    SpoilerMove move;
    move.side = w[0] == "L" ? BaSide::Left : BaSide::Right;
    try {
      for (std::size_t i = 1; i < w.size(); ++i) move.choices.push_back(parse_choice(w[i]));
      auto response = duplicator_respond(state, move, a.cap);
      state = std::move(response.state);
    } catch (const InvalidInput& e) {
      out << "illegal move: " << e.what() << "\n";
      continue;
    } catch (const IllegalMove& e) {
      out << "illegal move: " << e.what() << "\n";
      continue;
    } catch (const StrategyBreakdown& e) {
      out << "strategy breakdown: " << e.what() << "\n";
      lines.push_back(json{{"breakdown", e.what()}}.dump());
      break;
    }
    lines.push_back(state_to_json(state));
    out << "player II: " << state.history.back() << "\n";
    print_state(state, out);
    const auto bad = state_violations(state);
    out << "condition check: " << (bad.empty() ? "verified" : "FAILED: " + bad.front()) << "\n";
  }
  save_transcript(a.transcript, lines, out);
}

json bagame_command(const BagameArgs& a, std::istream& in, std::ostream& out, bool& printed) {
  if (a.op == "repl") {
    bagame_repl(a, in, out);
    printed = true;
    return nullptr;
  }
  if (!a.seed) throw UsageError("--seed is required for randomized runs");
  RunConfig config;
  config.left = load_algebra_spec(a.left_spec);
  config.right = load_algebra_spec(a.right_spec);
  config.rounds = a.rounds;
  config.adversary = parse_adversary(a.adversary);
  config.seed = *a.seed;
  config.unbounded = a.unbounded;
  config.cap = a.cap;
  config.finite_size = a.finite_size;
  const auto run = run_adversarial(config);
  json records = json::array();
  std::vector<std::string> lines;
  for (const auto& r : run.records) {
    records.push_back(record_json(r));
    lines.push_back(records.back().dump());
  }
  if (!a.transcript.empty()) {
    std::ofstream file(a.transcript);
    for (const auto& l : lines) file << l << "\n";
  }
  if (run.breakdown) throw StrategyBreakdown(*run.breakdown);
  json result{{"left", config.left.name}, {"right", config.right.name}, {"rounds", a.rounds},
              {"adversary", a.adversary}, {"seed", *a.seed}, {"verified", run.all_verified()}};
  result["transcript"] = records;
  return result;
}

// ------------------------------------------------------------- formula

struct FormulaArgs {
  std::string op;
  std::string text;
  std::string lang;
  std::string structure;
  bool cof = false;
  std::vector<std::string> assign;
};

Language default_language(const std::string& op) {
  if (op == "translate-plus") return Language::L1S;
  if (op == "translate-prime") return Language::LbS;
  if (op == "prenex") return Language::Lmon;
  return Language::Lord;
}

Assignment parse_assignment(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& item : items) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--assign expects name=value, got " + item);
    try {
      std::size_t used = 0;
      const std::string value = item.substr(eq + 1);
      a[item.substr(0, eq)] = std::stoull(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::logic_error&) {
      throw UsageError("--assign value must be a natural number: " + item);
    }
  }
  return a;
}

// Returns the text-mode line and fills the JSON object.
std::string formula_command(const FormulaArgs& a, json& result) {
  const Language lang = a.lang.empty() ? default_language(a.op) : parse_language(a.lang);
  const Formula f = parse_formula(a.text, lang);
  result["formula"] = to_string(f);
  if (a.op == "parse") {
    result["size"] = f.size();
    result["rank"] = quantifier_rank(f);
    return to_string(f);
  }
  if (a.op == "classify") {
    const std::string c = class_name(classify(f));
    result["class"] = c;
    return c;
  }
  if (a.op == "positive") {
    const auto v = positivity_violation(f);
    result["positive"] = !v;
    result["violation"] = v ? json(to_string(*v)) : json(nullptr);
    return v ? "not positive: " + to_string(*v) : std::string("positive");
  }
  if (a.op == "translate-plus" || a.op == "translate-prime" || a.op == "prenex") {
    const Formula g = a.op == "translate-plus"    ? translate_plus(f)
                      : a.op == "translate-prime" ? translate_prime(f)
                                                  : moschovakis_prenex(f);
    result["result"] = to_string(g);
    return to_string(g);
  }
  if (a.structure.empty()) throw UsageError("formula eval needs --structure");
  const FiniteStructure s = load_structure(a.structure);
  const bool value = eval(f, s, lang, parse_assignment(a.assign), a.cof);
  result["value"] = value;
  return value ? "true" : "false";
}

// -------------------------------------------------------------- ideals

struct IdealArgs {
  std::string op;
  std::string input;
  bool strict = false;
};

json ideals_command(const IdealArgs& a) {
  const std::string text = inline_or_file(a.input);
  if (a.op == "seg") {
    const auto seg = seg_ideal(preorder_from_json(text), a.strict);
    if (!seg) return {{"improper", true}};
    json out{{"improper", false}};
    out["ideal"] = parsed(family_to_json(*seg));
    return out;
  }
  if (a.op == "access") {
    const auto r = is_access_ideal(family_from_json(text));
    json out{{"access", r.witness.has_value()}};
    out["witness"] = optional_preorder(r.witness);
    out["examined"] = r.examined;
    return out;
  }
  if (a.op == "minimal") {
    const auto r = is_minimal_access(family_from_json(text));
    json out{{"minimal", r.minimal}, {"access", r.access}};
    out["witness"] = optional_preorder(r.witness);
    out["blocking"] = r.blocking ? parsed(family_to_json(*r.blocking)) : json(nullptr);
    out["blocking_witness"] = optional_preorder(r.blocking_witness);
    out["sub_ideals_checked"] = r.sub_ideals_checked;
    return out;
  }
  const SurgeryInstance inst = surgery_from_json(text);
  const Preorder p1 = surgery(inst);
  if (a.op == "surgery") return preorder_value(p1);
  json out;
  out["result"] = preorder_value(p1);
  out["claims"] = parsed(claims_to_json(verify_surgery_claims(inst, p1)));
  return out;
}

}  // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Workbench for EF games, ordinal congruence, formula translation and preorder ideals", "efw"};
  app.fallthrough();
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Emit JSON output");

  OrdinalArgs ord;
  auto* ordinal = app.add_subcommand("ordinal", "Cantor normal form arithmetic and congruence mod w^w");
  ordinal->require_subcommand(1);
  for (const char* op : {"eq", "add", "mul", "cmp", "decomp"}) {
    auto* sub = ordinal->add_subcommand(op);
    sub->add_option("exprs", ord.exprs, "Ordinal expressions")->required();
    sub->callback([&ord, op] { ord.op = op; });
  }

  GameArgs game;
  auto* game_cmd = app.add_subcommand("game", "Brute-force EF games on finite structures");
  game_cmd->require_subcommand(1);
  for (const char* op : {"solve", "rank", "repl"}) {
    auto* sub = game_cmd->add_subcommand(op);
    sub->add_option("--left", game.left, "lin:n, pow:n:t, two:n:t, inline JSON or a file")->required();
    sub->add_option("--right", game.right, "Second structure")->required();
    sub->add_option("--rounds", game.rounds, "Number of rounds")->check(CLI::Range(0, 64));
    sub->add_option("--budget", game.budget, "Node budget");
    if (std::string(op) == "repl") sub->add_option("--transcript", game.transcript, "Transcript file");
    sub->callback([&game, sub, op] {
      game.op = op;
      game.rounds_set = sub->count("--rounds") > 0;
    });
  }

  BagameArgs ba;
  auto* bagame = app.add_subcommand("bagame", "Symbolic Boolean algebra game against the built-in strategy");
  bagame->require_subcommand(1);
  for (const char* op : {"run", "repl"}) {
    auto* sub = bagame->add_subcommand(op);
    sub->add_option("--left-spec", ba.left_spec, "Algebra spec file or inline JSON");
    sub->add_option("--right-spec", ba.right_spec, "Algebra spec file or inline JSON");
    sub->add_option("--rounds", ba.rounds, "Number of rounds");
    sub->add_flag("--unbounded", ba.unbounded, "No horizon; finite labels use --cap");
    sub->add_option("--cap", ba.cap, "Exponent used for unbounded play")->check(CLI::Range(1, 62));
    sub->add_option("--transcript", ba.transcript, "Transcript file (JSON lines)");
    if (std::string(op) == "run") {
      sub->add_option("--adversary", ba.adversary, "random, extract or finite-random")
          ->check(CLI::IsMember({"random", "extract", "finite-random"}));
      sub->add_option("--seed", ba.seed, "Random seed (mandatory)");
      sub->add_option("--finite-size", ba.finite_size, "Ground size for finite-random")->check(CLI::Range(1, 12));
    }
    sub->callback([&ba, op] { ba.op = op; });
  }

  FormulaArgs fa;
  auto* formula = app.add_subcommand("formula", "Parse, classify, translate and evaluate formulas");
  formula->require_subcommand(1);
  for (const char* op : {"parse", "classify", "positive", "translate-plus", "translate-prime", "prenex", "eval"}) {
    auto* sub = formula->add_subcommand(op);
    sub->add_option("--in", fa.text, "Formula text")->required();
    sub->add_option("--lang", fa.lang, "lord, lbs, l1s or lmon")->check(CLI::IsMember({"lord", "lbs", "l1s", "lmon"}));
    if (std::string(op) == "eval") {
      sub->add_option("--structure", fa.structure, "Structure spec or file");
      sub->add_flag("--cof", fa.cof, "Set variables range over cofinal sets");
      sub->add_option("--assign", fa.assign, "Free variable value, name=value");
    }
    sub->callback([&fa, op] { fa.op = op; });
  }

  IdealArgs ia;
  auto* ideals = app.add_subcommand("ideals", "Segment ideals, access ideals and preorder surgery");
  ideals->require_subcommand(1);
  for (const char* op : {"seg", "access", "minimal", "surgery", "verify"}) {
    auto* sub = ideals->add_subcommand(op);
    sub->add_option("--in", ia.input, "Input file or inline JSON")->required();
    sub->add_flag("--strict", ia.strict, "Use strict segments");
    sub->callback([&ia, op] { ia.op = op; });
  }

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  }

  try {
    json result;
    bool printed = false;
    if (ordinal->parsed()) {
      result = ordinal_command(ord);
    } else if (game_cmd->parsed()) {
      result = game_command(game, in, out, printed);
    } else if (bagame->parsed()) {
      result = bagame_command(ba, in, out, printed);
    } else if (formula->parsed()) {
      const std::string line = formula_command(fa, result);
      if (!as_json) {
        out << line << "\n";
        printed = true;
      }
    } else {
      result = ideals_command(ia);
    }
    if (!printed) out << result.dump() << "\n";
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    out << json{{"error", e.code()}, {"message", e.what()}}.dump() << "\n";
    return 1;
  } catch (const json::exception& e) {
    out << json{{"error", "invalid-input"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
}

}  // namespace efw::cli
