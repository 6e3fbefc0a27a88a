#include "efw/ordinal.hpp"

#include <cctype>
#include <limits>

#include "efw/error.hpp"

namespace efw {

namespace detail {

FreeList::~FreeList() {
  while (head) {
    void* next = *static_cast<void**>(head);
    ::operator delete(head);
    head = next;
  }
  count = static_cast<std::size_t>(-1);  // later frees go straight to the heap
}

FreeList& term_free_list() {
  thread_local FreeList list;
  return list;
}

}  // namespace detail

namespace {

std::uint64_t checked_add(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_add_overflow(a, b, &out)) throw UnsupportedOperand("coefficient overflow");
  return out;
}

std::uint64_t checked_mul(std::uint64_t a, std::uint64_t b) {
  std::uint64_t out = 0;
  if (__builtin_mul_overflow(a, b, &out)) throw UnsupportedOperand("coefficient overflow");
  return out;
}

std::strong_ordering compare_terms(const Terms& a, const Terms& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (auto c = a[i].exponent <=> b[i].exponent; c != 0) return c;
    if (auto c = a[i].coefficient <=> b[i].coefficient; c != 0) return c;
  }
  return a.size() <=> b.size();
}

// Cnf sum on raw term lists: terms of `a` below the leading exponent of `b`
// are absorbed.
Terms add_terms(const Terms& a, const Terms& b) {
  if (b.empty()) return a;
  const Ordinal& lead = b.front().exponent;
  Terms out;
  std::size_t i = 0;
  for (; i < a.size() && a[i].exponent > lead; ++i) out.push_back(a[i]);
  std::size_t j = 0;
  if (i < a.size() && a[i].exponent == lead) {
    out.push_back({lead, checked_add(a[i].coefficient, b.front().coefficient)});
    j = 1;
  }
  for (; j < b.size(); ++j) out.push_back(b[j]);
  return out;
}

bool terms_below_omega_omega(const Terms& terms) {
  for (const auto& t : terms) {
    if (!t.exponent.as_natural()) return false;
  }
  return true;
}

// The unique e' with w + e' = e, for Cnf e >= w.
Ordinal subtract_omega_on_left(const Ordinal& e) {
  const auto& terms = e.terms();
  const auto lead = terms.front().exponent.as_natural();
  if (lead && *lead == 1) {
    Terms rest = terms;
    if (rest.front().coefficient == 1) {
      rest.erase(rest.begin());
    } else {
      rest.front().coefficient -= 1;
    }
    return Ordinal::from_terms(std::move(rest));
  }
  return e;  // e >= w^2 absorbs the leading w
}

std::string term_to_string(const CnfTerm& t) {
  const auto exp_nat = t.exponent.as_natural();
  std::string base;
  if (exp_nat && *exp_nat == 0) return std::to_string(t.coefficient);
  if (exp_nat && *exp_nat == 1) {
    base = "w";
  } else if (exp_nat) {
    base = "w^" + std::to_string(*exp_nat);
  } else if (t.exponent == Ordinal::omega()) {
    base = "w^w";
  } else {
    base = "w^(" + t.exponent.to_string() + ")";
  }
  if (t.coefficient != 1) base += "*" + std::to_string(t.coefficient);
  return base;
}

std::string terms_to_string(const Terms& terms) {
  std::string out;
  for (const auto& t : terms) {
    if (!out.empty()) out += "+";
    out += term_to_string(t);
  }
  return out;
}

class OrdinalParser {
 public:
  explicit OrdinalParser(std::string_view text) : text_(text) {}

  Ordinal parse() {
    Ordinal value = ordinal();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return value;
  }

 private:
  Ordinal ordinal() {
    skip_space();
    if (peek_word("Card")) {
      pos_ += 4;
      expect('(');
      const auto index = number();
      if (index == 0 || index > std::numeric_limits<std::uint32_t>::max())
        fail("cardinal index must be a positive 32-bit integer");
      expect(')');
      return symbolic_tail(Ordinal::cardinal(static_cast<std::uint32_t>(index)));
    }
    if (peek_word("On")) {
      pos_ += 2;
      return symbolic_tail(Ordinal::on());
    }
    return sum();
  }

  Ordinal symbolic_tail(Ordinal head) {
    skip_space();
    if (!accept('+')) return head;
    const std::size_t at = pos_;
    Ordinal tail = sum();
    if (!tail.below_omega_omega()) {
      throw SyntaxError(at, "a symbolic value only takes a tail below w^w");
    }
    return add(head, tail);
  }

  Ordinal sum() {
    Ordinal value = term();
    while (true) {
      skip_space();
      if (!accept('+')) break;
      const std::size_t at = pos_;
      skip_space();
      if (peek_word("Card") || peek_word("On")) {
        throw SyntaxError(at, "symbolic values may only lead an expression");
      }
      value = add(value, term());
    }
    return value;
  }

  Ordinal term() {
    skip_space();
    if (accept('w')) {
      Ordinal exponent = Ordinal::natural(1);
      skip_space();
      if (accept('^')) exponent = atom();
      std::uint64_t coefficient = 1;
      skip_space();
      if (accept('*')) coefficient = number();
      if (coefficient == 0) return Ordinal::zero();
      return Ordinal::omega_power(exponent, coefficient);
    }
    return Ordinal::natural(number());
  }

  Ordinal atom() {
    skip_space();
    if (accept('w')) return Ordinal::omega();
    if (accept('(')) {
      const std::size_t at = pos_;
      Ordinal inner = ordinal();
      if (inner.is_symbolic()) throw SyntaxError(at, "symbolic values cannot appear in exponents");
      expect(')');
      return inner;
    }
    return Ordinal::natural(number());
  }

  std::uint64_t number() {
    skip_space();
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      fail("expected a natural number, 'w' or '('");
    }
    std::uint64_t value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      const auto digit = static_cast<std::uint64_t>(text_[pos_] - '0');
      if (value > (std::numeric_limits<std::uint64_t>::max() - digit) / 10) fail("number too large");
      value = value * 10 + digit;
      ++pos_;
    }
    return value;
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool peek_word(std::string_view w) const { return text_.substr(pos_, w.size()) == w; }
  bool accept(char c) {
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    skip_space();
    if (!accept(c)) fail(std::string("expected '") + c + "'");
  }
  [[noreturn]] void fail(const std::string& message) const { throw SyntaxError(pos_, message); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

std::strong_ordering operator<=>(const SymbolTag& a, const SymbolTag& b) {
  if (a.kind != b.kind) return a.kind == SymbolTag::Kind::Card ? std::strong_ordering::less
                                                              : std::strong_ordering::greater;
  if (a.kind == SymbolTag::Kind::On) return std::strong_ordering::equal;
  return a.index <=> b.index;
}

Ordinal Ordinal::natural(std::uint64_t n) {
  Ordinal out;
  if (n > 0) out.terms_ = Terms(1, CnfTerm{Ordinal{}, n});
  return out;
}

Ordinal Ordinal::omega() { return omega_power(natural(1)); }

Ordinal Ordinal::omega_power(const Ordinal& exponent, std::uint64_t coefficient) {
  if (exponent.is_symbolic()) throw UnsupportedOperand("exponent must be a Cnf ordinal");
  Ordinal out;
  if (coefficient > 0) out.terms_.push_back({exponent, coefficient});
  return out;
}

Ordinal Ordinal::cardinal(std::uint32_t index) {
  if (index == 0) throw InvalidInput("cardinal index must be >= 1");
  return symbolic(SymbolTag::card(index));
}

Ordinal Ordinal::on() { return symbolic(SymbolTag::on()); }

Ordinal Ordinal::from_terms(Terms terms) {
  Ordinal out;
  out.terms_ = std::move(terms);
  if (!out.is_canonical()) throw InvalidInput("terms are not in Cantor normal form");
  return out;
}

Ordinal Ordinal::symbolic(SymbolTag tag, Terms tail) {
  if (tag.kind == SymbolTag::Kind::Card && tag.index == 0) {
    throw InvalidInput("cardinal index must be >= 1");
  }
  Ordinal out;
  out.symbol_ = tag;
  out.terms_ = std::move(tail);
  if (!out.is_canonical()) throw InvalidInput("symbolic tail must be canonical and below w^w");
  return out;
}

bool Ordinal::is_zero() const { return !symbol_ && terms_.empty(); }

std::optional<std::uint64_t> Ordinal::as_natural() const {
  if (symbol_) return std::nullopt;
  if (terms_.empty()) return 0;
  if (terms_.size() == 1 && terms_.front().exponent.is_zero()) return terms_.front().coefficient;
  return std::nullopt;
}

bool Ordinal::below_omega_omega() const { return !symbol_ && terms_below_omega_omega(terms_); }

bool Ordinal::is_canonical() const {
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    if (t.coefficient == 0) return false;
    if (t.exponent.is_symbolic() || !t.exponent.is_canonical()) return false;
    if (i > 0 && !(terms_[i - 1].exponent > t.exponent)) return false;
  }
  if (symbol_ && !terms_below_omega_omega(terms_)) return false;
  return true;
}

std::string Ordinal::to_string() const {
  if (symbol_) {
    std::string head =
        symbol_->kind == SymbolTag::Kind::On ? "On" : "Card(" + std::to_string(symbol_->index) + ")";
    if (terms_.empty()) return head;
    return head + "+" + terms_to_string(terms_);
  }
  if (terms_.empty()) return "0";
  return terms_to_string(terms_);
}

bool operator==(const Ordinal& a, const Ordinal& b) {
  return a.symbol_ == b.symbol_ && a.terms_ == b.terms_;
}

std::strong_ordering operator<=>(const Ordinal& a, const Ordinal& b) {
  if (a.symbol_.has_value() != b.symbol_.has_value()) {
    return a.symbol_ ? std::strong_ordering::greater : std::strong_ordering::less;
  }
  if (a.symbol_) {
    if (auto c = *a.symbol_ <=> *b.symbol_; c != 0) return c;
  }
  return compare_terms(a.terms_, b.terms_);
}

std::strong_ordering compare(const Ordinal& a, const Ordinal& b) { return a <=> b; }

Ordinal add(const Ordinal& a, const Ordinal& b) {
  if (b.is_symbolic()) {
    if (!a.is_symbolic() || *a.symbol() < *b.symbol()) return b;
    throw UnsupportedOperand(a.to_string() + " + " + b.to_string() + " is not representable");
  }
  if (a.is_symbolic()) {
    if (!b.below_omega_omega()) {
      throw UnsupportedOperand(a.to_string() + " + " + b.to_string() +
                               " leaves the symbolic tail range (< w^w)");
    }
    return Ordinal::symbolic(*a.symbol(), add_terms(a.terms(), b.terms()));
  }
  if (const auto x = a.as_natural(), y = b.as_natural(); x && y) return Ordinal::natural(checked_add(*x, *y));
  return Ordinal::from_terms(add_terms(a.terms(), b.terms()));
}

Ordinal mul(const Ordinal& a, const Ordinal& b) {
  if (a.is_symbolic()) {
    throw UnsupportedOperand("symbolic left factor " + a.to_string() + " is not supported");
  }
  if (b.is_symbolic()) {
    if (a.is_zero()) return Ordinal::zero();
    // a * (tag + tail) = tag + a * tail, since a * tag = sup{a * g : g < tag} = tag.
    Ordinal head = Ordinal::symbolic(*b.symbol());
    return add(head, mul(a, Ordinal::from_terms(b.terms())));
  }
  if (a.is_zero() || b.is_zero()) return Ordinal::zero();
  if (const auto x = a.as_natural(), y = b.as_natural(); x && y) return Ordinal::natural(checked_mul(*x, *y));

  const CnfTerm& lead = a.terms().front();
  Ordinal result;
  for (const auto& t : b.terms()) {
    Ordinal piece;
    if (t.exponent.is_zero()) {
      Terms terms = a.terms();
      terms.front().coefficient = checked_mul(lead.coefficient, t.coefficient);
      piece = Ordinal::from_terms(std::move(terms));
    } else {
      piece = Ordinal::omega_power(add(lead.exponent, t.exponent), t.coefficient);
    }
    result = add(result, piece);
  }
  return result;
}

Ordinal parse_ordinal(std::string_view text) { return OrdinalParser(text).parse(); }

Decomposition decompose_mod_omega_omega(const Ordinal& a) {
  if (a.is_symbolic()) {
    return {Ordinal::symbolic(*a.symbol()), Ordinal::from_terms(a.terms())};
  }
  Terms quotient;
  Terms remainder;
  for (const auto& t : a.terms()) {
    if (t.exponent.as_natural()) {
      remainder.push_back(t);
    } else {
      quotient.push_back({subtract_omega_on_left(t.exponent), t.coefficient});
    }
  }
  return {Ordinal::from_terms(std::move(quotient)), Ordinal::from_terms(std::move(remainder))};
}

std::optional<CongruenceWitness> congruent_mod_omega_omega(const Ordinal& a, const Ordinal& b) {
  auto da = decompose_mod_omega_omega(a);
  auto db = decompose_mod_omega_omega(b);
  if (da.remainder != db.remainder) return std::nullopt;
  if (da.quotient.is_zero() != db.quotient.is_zero()) return std::nullopt;
  return CongruenceWitness{std::move(da.quotient), std::move(db.quotient), std::move(da.remainder)};
}

bool elementarily_equivalent(const Ordinal& a, const Ordinal& b) {
  return congruent_mod_omega_omega(a, b).has_value();
}

}  // namespace efw
