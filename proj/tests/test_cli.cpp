#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "efw/cli.hpp"

using nlohmann::json;

namespace {

struct Result {
  int code = 0;
  std::string out, err;
};

Result run(const std::vector<std::string>& args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  Result r;
  r.code = efw::cli::run(args, in, out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

json run_json(const std::vector<std::string>& args) {
  const auto r = run(args);
  REQUIRE(r.code == 0);
  return json::parse(r.out);
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("ordinal subcommands") {
  CHECK(run({"ordinal", "eq", "w^w*2+5", "w^w*9+5"}).out ==
        "{\"equivalent\":true,\"witness\":{\"xi\":\"2\",\"eta\":\"9\",\"delta\":\"5\"}}\n");
  CHECK(run_json({"ordinal", "add", "1", "w"})["result"] == "w");
  CHECK(run_json({"ordinal", "mul", "w+1", "w+1"})["result"] == "w^2+w+1");
  CHECK(run_json({"ordinal", "cmp", "Card(1)", "On"})["cmp"] == "<");
  const auto d = run_json({"ordinal", "decomp", "w^w*2+5"});
  CHECK(d["quotient"] == "2");
  CHECK(d["remainder"] == "5");
  CHECK(run_json({"ordinal", "eq", "5", "w^w+5"})["equivalent"] == false);
}

TEST_CASE("game subcommands") {
  CHECK(run({"game", "solve", "--left", "lin:3", "--right", "lin:4", "--rounds", "3"}).out ==
        "{\"winner\":\"spoiler\",\"rank\":3}\n");
  CHECK(run_json({"game", "solve", "--left", "lin:3", "--right", "lin:4", "--rounds", "2"})["winner"] == "duplicator");
  CHECK(run_json({"game", "rank", "--left", "lin:7", "--right", "lin:8", "--rounds", "5"})["rank"] == 4);
}

TEST_CASE("game repl") {
  const auto r = run({"game", "repl", "--left", "lin:3", "--right", "lin:4", "--rounds", "2"},
                     "M 1\nX 9\nN 7\nM 0\n");
  CHECK(r.code == 0);
  CHECK(r.out.find("player II answers") != std::string::npos);
  CHECK(r.out.find("expected 'M <element>'") != std::string::npos);
  CHECK(r.out.find("illegal move") != std::string::npos);
  CHECK(r.out.find("duplicator survives") != std::string::npos);
  CHECK(r.out.find("transcript:") != std::string::npos);
}

TEST_CASE("formula subcommands") {
  CHECK(run({"formula", "translate-plus", "--in", "p0 in x0"}).out == "Atom(y0) & y0 <= y1\n");
  CHECK(run({"formula", "prenex", "--in", "A u. u in X"}).out == "A u. true -> u in X\n");
  CHECK(run({"formula", "classify", "--lang", "lmon", "--in", "A X. A x. x in X"}).out == "pi11\n");
  CHECK(run({"formula", "eval", "--lang", "lord", "--in", "A x. E y. x < y", "--structure", "lin:3"}).out ==
        "false\n");
  CHECK(run({"formula", "eval", "--lang", "lbs", "--in", "S(x)", "--structure", "pow:3:2", "--assign", "x=1"}).out ==
        "true\n");
  const auto j = run_json({"--json", "formula", "positive", "--lang", "lmon", "--in", "~(u in X)"});
  CHECK(j["positive"] == false);
  CHECK(j["violation"] == "~(u in X)");
  CHECK(run_json({"--json", "formula", "parse", "--in", "A x. x < x"})["rank"] == 1);
}

TEST_CASE("ideals subcommands") {
  const std::string l6 =
      R"({"base":{"size":6,"rel":[[1,1,1,1,1,1],[0,1,1,1,1,1],[0,0,1,1,1,1],[0,0,0,1,1,1],[0,0,0,0,1,1],[0,0,0,0,0,1]]},)"
      R"("x0":3,"a":[2,5],"b":[1],"zip":[[5,1]]})";
  const auto v = run_json({"ideals", "verify", "--in", l6});
  REQUIRE(v["claims"].size() == 3);
  for (const auto& c : v["claims"]) CHECK(c["holds"] == true);
  CHECK(run_json({"ideals", "minimal", "--in", R"({"ground":2,"members":[[],[0]]})"})["minimal"] == true);
  CHECK(run_json({"ideals", "access", "--in", R"({"ground":3,"members":[[]]})"})["access"] == false);
  CHECK(run_json({"ideals", "seg", "--in", R"({"size":2,"rel":[[1,1],[0,1]]})"})["improper"] == true);
  CHECK(run_json({"ideals", "seg", "--strict", "--in", R"({"size":2,"rel":[[1,1],[0,1]]})"})["improper"] == false);
}

TEST_CASE("bagame subcommands") {
  const std::vector<std::string> args{"bagame", "run", "--rounds", "6", "--seed", "3"};
  const auto a = run(args), b = run(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(json::parse(a.out)["verified"] == true);

  const auto broken = run({"bagame", "run", "--left-spec", R"js({"name":"P(omega)","inf_small_inhabited":false})js",
                           "--adversary", "extract", "--unbounded", "--cap", "3", "--rounds", "30", "--seed", "0"});
  CHECK(broken.code == 1);
  CHECK(json::parse(broken.out)["error"] == "strategy-breakdown");

  const auto repl = run({"bagame", "repl", "--rounds", "2"}, "L\nL InfSmall/Large\nquit\n");
  CHECK(repl.code == 0);
  CHECK(repl.out.find("condition check: verified") != std::string::npos);
  CHECK(repl.out.find("expected L or R") != std::string::npos);
}

TEST_CASE("exit codes and error objects") {
  auto r = run({"ordinal", "add", "w+*2", "1"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["error"] == "syntax");

  r = run({"game", "solve", "--left", "lin:3", "--right", "pow:2:1", "--rounds", "1"});
  CHECK(r.code == 1);
  CHECK(json::parse(r.out)["error"] == "signature-mismatch");

  CHECK(run({"game", "solve", "--left", "lin:3", "--right", "lin:3"}).code == 2);
  CHECK(run({"bagame", "run", "--rounds", "3"}).code == 2);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"formula", "parse", "--lang", "zzz", "--in", "true"}).code == 2);
  CHECK(run({"formula", "eval", "--in", "true"}).code == 2);
  CHECK_FALSE(run({"frobnicate"}).err.empty());
}

TEST_CASE("transcript files") {
  const std::string path = "efw_cli_transcript_test.jsonl";
  const auto r = run({"game", "repl", "--left", "lin:2", "--right", "lin:2", "--rounds", "1", "--transcript", path},
                     "M 0\n");
  CHECK(r.code == 0);
  std::ifstream file(path);
  std::string line;
  std::size_t lines = 0;
  while (std::getline(file, line)) {
    CHECK(json::accept(line));
    ++lines;
  }
  CHECK(lines == 2);
  std::remove(path.c_str());
}

}  // TEST_SUITE
