#include <cctype>

#include "efw/error.hpp"
#include "efw/formula.hpp"

namespace efw {

namespace {

// ---------------------------------------------------------------- printing

std::optional<std::string> atom_sugar(const Formula& f) {
  if (f.kind() != Kind::And || f.left().kind() != Kind::Not) return std::nullopt;
  const Formula& q = f.left().left();
  if (q.kind() != Kind::Forall || q.body().kind() != Kind::Subeq) return std::nullopt;
  const Variable& y = q.body().var();
  if (y.sort != Sort::Individual || !(f == atom_formula(y.name))) return std::nullopt;
  return y.name;
}

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Implies: return 1;
    case Kind::Or: return 2;
    case Kind::And: return atom_sugar(f) ? 4 : 3;
    case Kind::Exists: case Kind::Forall: return 0;
    default: return 4;
  }
}

void print(const Formula& f, bool rightmost, std::string& out) {
  if (auto y = atom_sugar(f)) {
    out += "Atom(" + *y + ")";
    return;
  }
  auto binop = [&](const char* op) {
    const int p = precedence(f);
    const int pl = precedence(f.left());
    const int pr = precedence(f.right());
    const bool left_parens = pl < p || (p == 1 && pl == 1);
    const bool right_parens = (pr < p && !(pr == 0 && rightmost)) || (p != 1 && pr == p);
    if (left_parens) out += "(";
    print(f.left(), left_parens, out);
    if (left_parens) out += ")";
    out += op;
    if (right_parens) out += "(";
    print(f.right(), right_parens || rightmost, out);
    if (right_parens) out += ")";
  };
  switch (f.kind()) {
    case Kind::True: out += "true"; return;
    case Kind::False: out += "false"; return;
    case Kind::Less: out += f.var().name + " < " + f.var2().name; return;
    case Kind::Eq:
    case Kind::UrEq: out += f.var().name + " = " + f.var2().name; return;
    case Kind::Subeq: out += f.var().name + " <= " + f.var2().name; return;
    case Kind::S: out += "S(" + f.var().name + ")"; return;
    case Kind::UrIn:
    case Kind::In: out += f.var().name + " in " + f.var2().name; return;
    case Kind::Not: {
      const Formula& g = f.left();
      const bool bare = g.kind() == Kind::Not || g.kind() == Kind::S || g.kind() == Kind::True ||
                        g.kind() == Kind::False || atom_sugar(g);
      out += "~";
      if (!bare) out += "(";
      print(g, true, out);
      if (!bare) out += ")";
      return;
    }
    case Kind::And: binop(" & "); return;
    case Kind::Or: binop(" | "); return;
    case Kind::Implies: binop(" -> "); return;
    case Kind::Exists:
    case Kind::Forall:
      out += f.kind() == Kind::Exists ? "E " : "A ";
      out += f.var().name + ". ";
      print(f.body(), rightmost, out);
      return;
  }
}

// ----------------------------------------------------------------- parsing

enum class Tok { Ident, LParen, RParen, Dot, Not, And, Or, Arrow, Lt, Le, Eq, End };

struct Token {
  Tok type;
  std::string text;
  std::size_t pos;
};

std::vector<Token> tokenize(std::string_view s) {
  std::vector<Token> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(s.substr(i, j - i)), i});
      i = j;
      continue;
    }
    auto two = s.substr(i, 2);
    if (two == "->") { out.push_back({Tok::Arrow, "->", i}); i += 2; continue; }
    if (two == "<=") { out.push_back({Tok::Le, "<=", i}); i += 2; continue; }
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", i}); break;
      case ')': out.push_back({Tok::RParen, ")", i}); break;
      case '.': out.push_back({Tok::Dot, ".", i}); break;
      case '~': out.push_back({Tok::Not, "~", i}); break;
      case '&': out.push_back({Tok::And, "&", i}); break;
      case '|': out.push_back({Tok::Or, "|", i}); break;
      case '<': out.push_back({Tok::Lt, "<", i}); break;
      case '=': out.push_back({Tok::Eq, "=", i}); break;
      default: throw SyntaxError(i, std::string("unexpected character '") + c + "'");
    }
    ++i;
  }
  out.push_back({Tok::End, "", s.size()});
  return out;
}

bool is_keyword(const std::string& w) {
  return w == "A" || w == "E" || w == "S" || w == "in" || w == "true" || w == "false" || w == "Atom";
}

class Parser {
 public:
  Parser(std::string_view text, Language lang) : tokens_(tokenize(text)), lang_(lang) {}

  Formula parse() {
    Formula f = implication();
    if (peek().type != Tok::End) fail("unexpected '" + peek().text + "'");
    return f;
  }

 private:
  Formula implication() {
    Formula l = disjunction();
    if (accept(Tok::Arrow)) return Formula::implication(l, implication());
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (accept(Tok::Or)) l = Formula::disjunction(l, conjunction());
    return l;
  }

  Formula conjunction() {
    Formula l = unary();
    while (accept(Tok::And)) l = Formula::conjunction(l, unary());
    return l;
  }

  Formula unary() {
    if (accept(Tok::Not)) return Formula::negation(unary());
    const Token& t = peek();
    if (t.type == Tok::Ident && (t.text == "A" || t.text == "E")) {
      ++at_;
      const Kind kind = t.text == "A" ? Kind::Forall : Kind::Exists;
      const Variable v = variable();
      expect(Tok::Dot, "'.' after the quantified variable");
      return Formula::quantifier(kind, v, implication());
    }
    return primary();
  }

  Formula primary() {
    if (accept(Tok::LParen)) {
      Formula f = implication();
      expect(Tok::RParen, "')'");
      return f;
    }
    const Token& t = peek();
    if (t.type != Tok::Ident) fail("expected a formula");
    if (t.text == "true") { ++at_; return Formula::truth(); }
    if (t.text == "false") { ++at_; return Formula::falsity(); }
    if (t.text == "S") {
      ++at_;
      if (lang_ != Language::LbS && lang_ != Language::L1S) fail_at(t.pos, "S is not in this language");
      expect(Tok::LParen, "'(' after S");
      const std::size_t pos = peek().pos;
      const Variable v = variable();
      if (lang_ == Language::L1S && v.sort != Sort::Set) fail_at(pos, "S applies to set variables");
      expect(Tok::RParen, "')'");
      return Formula::atom(Kind::S, v);
    }
    if (t.text == "Atom") {
      ++at_;
      if (lang_ != Language::LbS) fail_at(t.pos, "Atom(...) is only available in lbs");
      expect(Tok::LParen, "'(' after Atom");
      const Variable v = variable();
      expect(Tok::RParen, "')'");
      return atom_formula(v.name);
    }
    const std::size_t pos = t.pos;
    const Variable a = variable();
    const Token op = peek();
    const bool relation = op.type == Tok::Lt || op.type == Tok::Le || op.type == Tok::Eq ||
                          (op.type == Tok::Ident && op.text == "in");
    if (!relation) fail_at(op.pos, "expected '<', '<=', '=' or 'in'");
    ++at_;
    const Variable b = variable();
    switch (op.type) {
      case Tok::Lt:
        if (lang_ != Language::Lord && lang_ != Language::Lmon) fail_at(op.pos, "'<' is not in this language");
        if (a.sort != Sort::Individual || b.sort != Sort::Individual) fail_at(pos, "'<' relates individuals");
        return Formula::atom(Kind::Less, a, b);
      case Tok::Le:
        if (lang_ != Language::LbS) fail_at(op.pos, "'<=' is only available in lbs");
        return Formula::atom(Kind::Subeq, a, b);
      case Tok::Eq:
        if (a.sort != b.sort) fail_at(pos, "'=' between different sorts");
        if (a.sort == Sort::Urelement) return Formula::atom(Kind::UrEq, a, b);
        if (a.sort == Sort::Set && lang_ == Language::Lmon) fail_at(pos, "set equality is not in lmon");
        return Formula::atom(Kind::Eq, a, b);
      case Tok::Ident:
        if (op.text != "in") break;
        if (lang_ == Language::L1S) {
          if (a.sort != Sort::Urelement || b.sort != Sort::Set) fail_at(pos, "'in' needs p in x");
          return Formula::atom(Kind::UrIn, a, b);
        }
        if (lang_ == Language::Lmon) {
          if (a.sort != Sort::Individual || b.sort != Sort::Set) fail_at(pos, "'in' needs x in X");
          return Formula::atom(Kind::In, a, b);
        }
        fail_at(op.pos, "'in' is not in this language");
      default:
        break;
    }
    fail_at(op.pos, "expected '<', '<=', '=' or 'in'");
  }

  Variable variable() {
    const Token& t = peek();
    if (t.type != Tok::Ident || is_keyword(t.text)) fail("expected a variable");
    ++at_;
    const bool upper = std::isupper(static_cast<unsigned char>(t.text.front()));
    if (upper && lang_ != Language::Lmon) fail_at(t.pos, "upper case variables are set variables of lmon");
    return {t.text, sort_of(t.text, lang_)};
  }

  const Token& peek() const { return tokens_[at_]; }
  bool accept(Tok type) {
    if (peek().type != type) return false;
    ++at_;
    return true;
  }
  void expect(Tok type, const std::string& what) {
    if (!accept(type)) fail("expected " + what);
  }
  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(peek().pos, message); }
  [[noreturn]] void fail_at(std::size_t pos, const std::string& message) const {
    throw SyntaxError(pos, message);
  }

  std::vector<Token> tokens_;
  std::size_t at_ = 0;
  Language lang_;
};

}  // namespace

std::string to_string(const Formula& f) {
  std::string out;
  print(f, true, out);
  return out;
}

Formula parse_formula(std::string_view text, Language lang) { return Parser(text, lang).parse(); }

}  // namespace efw
