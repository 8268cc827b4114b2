#pragma once

// Conic-constructible expressions: literals in Q(i) closed under field
// operations, conjugation, square roots and cube roots.
//
// Grammar (whitespace-insensitive except inside rational literals):
//
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | primary
//   primary := INT | INT '/' INT      (no spaces: one rational literal)
//            | 'i' | '(' expr ')'
//            | ('sqrt' | 'cbrt' | 'conj') '(' expr ')'
//
// A '-' directly followed by an integer literal folds into the literal.

#include <cctype>
#include <memory>
#include <string>
#include <string_view>
#include <utility>

#include "conicon/errors.hpp"
#include "conicon/numeric.hpp"

namespace conicon {

/// Element of Q(i). mpq_class keeps fractions reduced with positive denominators.
struct GaussianRational {
  mpq_class re{0};
  mpq_class im{0};

  static GaussianRational real(mpq_class v) { return {std::move(v), 0}; }
  static GaussianRational imaginary_unit() { return {0, 1}; }

  bool is_zero() const { return re == 0 && im == 0; }
  BigComplex value(Precision p) const { return {BigReal(re, p), BigReal(im, p)}; }

  friend bool operator==(const GaussianRational&, const GaussianRational&) = default;
};

/// "p/q" (or "p" when q = 1).
inline std::string rational_string(const mpq_class& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

/// Parses "p" or "p/q" with optional sign. Throws std::invalid_argument.
inline mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  auto valid_int = [](std::string_view t) {
    if (!t.empty() && (t.front() == '-' || t.front() == '+')) t.remove_prefix(1);
    if (t.empty()) return false;
    for (char ch : t)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_int(num) || !valid_int(den) || den.front() == '-' || den.front() == '+')
    throw std::invalid_argument("not a rational: '" + s + "'");
  if (num.front() == '+') num.erase(0, 1);
  mpz_class n{num}, d{den};
  if (d == 0) throw std::invalid_argument("zero denominator: '" + s + "'");
  mpq_class q{n, d};
  q.canonicalize();
  return q;
}

enum class ExprKind { Lit, Add, Sub, Mul, Div, Neg, Conj, Sqrt, Cbrt };

class Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Immutable expression tree node.
class Expr {
 public:
  static ExprPtr lit(GaussianRational v) { return ExprPtr(new Expr(ExprKind::Lit, std::move(v), nullptr, nullptr)); }
  static ExprPtr lit(long n) { return lit(GaussianRational::real(n)); }
  static ExprPtr i() { return lit(GaussianRational::imaginary_unit()); }
  static ExprPtr binary(ExprKind k, ExprPtr a, ExprPtr b) { return ExprPtr(new Expr(k, {}, std::move(a), std::move(b))); }
  static ExprPtr unary(ExprKind k, ExprPtr a) { return ExprPtr(new Expr(k, {}, std::move(a), nullptr)); }

  ExprKind kind() const noexcept { return kind_; }
  const GaussianRational& literal() const noexcept { return lit_; }
  const ExprPtr& lhs() const noexcept { return lhs_; }
  const ExprPtr& rhs() const noexcept { return rhs_; }
  /// Single child of a unary node.
  const ExprPtr& child() const noexcept { return lhs_; }

  bool is_binary() const noexcept {
    return kind_ == ExprKind::Add || kind_ == ExprKind::Sub || kind_ == ExprKind::Mul || kind_ == ExprKind::Div;
  }
  bool is_unary() const noexcept { return !is_binary() && kind_ != ExprKind::Lit; }

 private:
  Expr(ExprKind k, GaussianRational v, ExprPtr a, ExprPtr b)
      : kind_(k), lit_(std::move(v)), lhs_(std::move(a)), rhs_(std::move(b)) {}

  ExprKind kind_;
  GaussianRational lit_;
  ExprPtr lhs_;
  ExprPtr rhs_;
};

inline ExprPtr operator+(ExprPtr a, ExprPtr b) { return Expr::binary(ExprKind::Add, std::move(a), std::move(b)); }
inline ExprPtr operator-(ExprPtr a, ExprPtr b) { return Expr::binary(ExprKind::Sub, std::move(a), std::move(b)); }
inline ExprPtr operator*(ExprPtr a, ExprPtr b) { return Expr::binary(ExprKind::Mul, std::move(a), std::move(b)); }
inline ExprPtr operator/(ExprPtr a, ExprPtr b) { return Expr::binary(ExprKind::Div, std::move(a), std::move(b)); }
inline ExprPtr neg(ExprPtr a) { return Expr::unary(ExprKind::Neg, std::move(a)); }
inline ExprPtr conj(ExprPtr a) { return Expr::unary(ExprKind::Conj, std::move(a)); }
inline ExprPtr sqrt(ExprPtr a) { return Expr::unary(ExprKind::Sqrt, std::move(a)); }
inline ExprPtr cbrt(ExprPtr a) { return Expr::unary(ExprKind::Cbrt, std::move(a)); }

inline bool structurally_equal(const Expr& a, const Expr& b) {
  if (a.kind() != b.kind()) return false;
  if (a.kind() == ExprKind::Lit) return a.literal() == b.literal();
  if (!structurally_equal(*a.lhs(), *b.lhs())) return false;
  return !a.is_binary() || structurally_equal(*a.rhs(), *b.rhs());
}

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : s_(text) {}

  ExprPtr parse() {
    ExprPtr e = expr();
    skip_ws();
    if (pos_ != s_.size()) throw SyntaxError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
    return e;
  }

 private:
  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  bool accept(char ch) {
    skip_ws();
    if (pos_ < s_.size() && s_[pos_] == ch) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char ch) {
    if (!accept(ch)) {
      if (pos_ >= s_.size()) throw SyntaxError(std::string("expected '") + ch + "' but input ended", pos_);
      throw SyntaxError(std::string("expected '") + ch + "'", pos_);
    }
  }

  bool at_digit() {
    skip_ws();
    return pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]));
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (accept('+')) e = Expr::binary(ExprKind::Add, e, term());
      else if (accept('-')) e = Expr::binary(ExprKind::Sub, e, term());
      else return e;
    }
  }

  ExprPtr term() {
    ExprPtr e = unary();
    for (;;) {
      if (accept('*')) e = Expr::binary(ExprKind::Mul, e, unary());
      else if (accept('/')) e = Expr::binary(ExprKind::Div, e, unary());
      else return e;
    }
  }

  ExprPtr unary() {
    if (accept('-')) {
      if (at_digit()) {
        mpq_class v = rational_literal();
        return Expr::lit(GaussianRational::real(-v));
      }
      return Expr::unary(ExprKind::Neg, unary());
    }
    return primary();
  }

  mpq_class rational_literal() {
    std::size_t start = pos_;
    while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    mpz_class num(std::string(s_.substr(start, pos_ - start)));
    mpz_class den(1);
    if (pos_ + 1 < s_.size() && s_[pos_] == '/' && std::isdigit(static_cast<unsigned char>(s_[pos_ + 1]))) {
      std::size_t dstart = ++pos_;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      den = mpz_class(std::string(s_.substr(dstart, pos_ - dstart)));
      if (den == 0) throw SyntaxError("zero denominator in literal", dstart);
    }
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }

  ExprPtr primary() {
    skip_ws();
    if (pos_ >= s_.size()) throw SyntaxError("unexpected end of input", pos_);
    if (at_digit()) return Expr::lit(GaussianRational::real(rational_literal()));
    if (accept('(')) {
      ExprPtr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(s_[pos_]))) {
      std::size_t start = pos_;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) ++pos_;
      std::string_view word = s_.substr(start, pos_ - start);
      if (word == "i") return Expr::i();
      ExprKind k;
      if (word == "sqrt") k = ExprKind::Sqrt;
      else if (word == "cbrt") k = ExprKind::Cbrt;
      else if (word == "conj") k = ExprKind::Conj;
      else throw SyntaxError("unknown identifier '" + std::string(word) + "'", start);
      expect('(');
      ExprPtr arg = expr();
      expect(')');
      return Expr::unary(k, arg);
    }
    throw SyntaxError("unexpected '" + std::string(1, s_[pos_]) + "'", pos_);
  }

  std::string_view s_;
  std::size_t pos_ = 0;
};

}  // namespace detail

inline ExprPtr parse(std::string_view text) { return detail::Parser(text).parse(); }

/// Fully parenthesized text form; parse(to_string(e)) is structurally equal
/// to e whenever every literal is a real rational or i.
inline std::string to_string(const Expr& e) {
  switch (e.kind()) {
    case ExprKind::Lit: {
      const auto& v = e.literal();
      if (v.im == 0) return rational_string(v.re);
      if (v.re == 0 && v.im == 1) return "i";
      return "(" + rational_string(v.re) + " + " + rational_string(v.im) + "*i)";
    }
    case ExprKind::Add: return "(" + to_string(*e.lhs()) + " + " + to_string(*e.rhs()) + ")";
    case ExprKind::Sub: return "(" + to_string(*e.lhs()) + " - " + to_string(*e.rhs()) + ")";
    case ExprKind::Mul: return "(" + to_string(*e.lhs()) + " * " + to_string(*e.rhs()) + ")";
    case ExprKind::Div: return "(" + to_string(*e.lhs()) + " / " + to_string(*e.rhs()) + ")";
    case ExprKind::Neg: return "-(" + to_string(*e.child()) + ")";
    case ExprKind::Conj: return "conj(" + to_string(*e.child()) + ")";
    case ExprKind::Sqrt: return "sqrt(" + to_string(*e.child()) + ")";
    case ExprKind::Cbrt: return "cbrt(" + to_string(*e.child()) + ")";
  }
  return {};
}

/// Direct evaluation with principal branches. This is the oracle that
/// constructions are verified against.
inline BigComplex eval(const Expr& e, Precision p) {
  switch (e.kind()) {
    case ExprKind::Lit: return e.literal().value(p);
    case ExprKind::Add: return eval(*e.lhs(), p) + eval(*e.rhs(), p);
    case ExprKind::Sub: return eval(*e.lhs(), p) - eval(*e.rhs(), p);
    case ExprKind::Mul: return eval(*e.lhs(), p) * eval(*e.rhs(), p);
    case ExprKind::Div: return eval(*e.lhs(), p) / eval(*e.rhs(), p);
    case ExprKind::Neg: return -eval(*e.child(), p);
    case ExprKind::Conj: return eval(*e.child(), p).conj();
    case ExprKind::Sqrt: return eval(*e.child(), p).sqrt();
    case ExprKind::Cbrt: return eval(*e.child(), p).cbrt();
  }
  return BigComplex(p);
}

struct RadicalCounts {
  int sqrt_count = 0;
  int cbrt_count = 0;
  friend bool operator==(const RadicalCounts&, const RadicalCounts&) = default;
};

inline RadicalCounts radical_counts(const Expr& e) {
  RadicalCounts out;
  if (e.kind() == ExprKind::Sqrt) ++out.sqrt_count;
  if (e.kind() == ExprKind::Cbrt) ++out.cbrt_count;
  for (const ExprPtr* c : {&e.lhs(), &e.rhs()}) {
    if (!*c) continue;
    RadicalCounts sub = radical_counts(**c);
    out.sqrt_count += sub.sqrt_count;
    out.cbrt_count += sub.cbrt_count;
  }
  return out;
}

/// Nesting depth of cube roots along any root-to-leaf path.
inline int cbrt_nesting(const Expr& e) {
  int d = 0;
  if (e.lhs()) d = std::max(d, cbrt_nesting(*e.lhs()));
  if (e.rhs()) d = std::max(d, cbrt_nesting(*e.rhs()));
  return d + (e.kind() == ExprKind::Cbrt ? 1 : 0);
}

}  // namespace conicon
