#include "heis/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <stdexcept>

namespace heis {

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (int i = 0; i < n; ++i) r *= x;
  return r;
}

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Polynomial parse() {
    std::vector<Monomial> terms;
    skip_ws();
    if (at_end()) fail("empty polynomial");
    bool first = true;
    while (!at_end()) {
      double sign = 1.0;
      if (peek() == '+' || peek() == '-') {
        sign = peek() == '-' ? -1.0 : 1.0;
        ++pos_;
        skip_ws();
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      Monomial m = term();
      m.coefficient *= sign;
      terms.push_back(m);
      first = false;
      skip_ws();
    }
    return Polynomial(std::move(terms));
  }

 private:
  Monomial term() {
    Monomial m{1.0, {0, 0, 0}};
    bool any = false;
    if (std::isdigit(static_cast<unsigned char>(peek())) || peek() == '.') {
      m.coefficient = number();
      any = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        if (peek() != 'x') fail("expected variable after '*'");
      }
    }
    while (peek() == 'x') {
      ++pos_;
      const char axis = peek();
      if (axis < '1' || axis > '3') fail("variable must be x1, x2 or x3");
      ++pos_;
      int e = 1;
      skip_ws();
      if (peek() == '^') {
        ++pos_;
        skip_ws();
        e = integer();
      }
      m.exponents[axis - '1'] += e;
      any = true;
      skip_ws();
      if (peek() == '*') {
        ++pos_;
        skip_ws();
        if (peek() != 'x') fail("expected variable after '*'");
      }
    }
    if (!any) fail("expected a number or a variable");
    return m;
  }

  double number() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    double v = 0.0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc()) fail("malformed number");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  int integer() {
    const char* begin = text_.data() + pos_;
    const char* end = text_.data() + text_.size();
    int v = 0;
    auto [ptr, ec] = std::from_chars(begin, end, v);
    if (ec != std::errc() || v < 0) fail("exponent must be a nonnegative integer");
    pos_ += static_cast<std::size_t>(ptr - begin);
    return v;
  }

  void skip_ws() {
    while (!at_end() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  bool at_end() const { return pos_ >= text_.size(); }
  char peek() const { return at_end() ? '\0' : text_[pos_]; }
  [[noreturn]] void fail(const char* what) const {
    throw std::invalid_argument("polynomial parse error at position " + std::to_string(pos_) + ": " +
                                what + " in \"" + std::string(text_) + "\"");
  }

  std::string_view text_;
  std::size_t pos_ = 0;
};

}  // namespace

Polynomial::Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) { canonicalize(); }

Polynomial Polynomial::constant(double c) { return Polynomial(std::vector<Monomial>{Monomial{c, {0, 0, 0}}}); }

Polynomial Polynomial::coordinate(int axis) {
  Monomial m{1.0, {0, 0, 0}};
  m.exponents[axis] = 1;
  return Polynomial({m});
}

Polynomial Polynomial::monomial(double c, int a, int b, int d) { return Polynomial(std::vector<Monomial>{Monomial{c, {a, b, d}}}); }

Polynomial Polynomial::parse(std::string_view text) { return Parser(text).parse(); }

void Polynomial::canonicalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const Monomial& a, const Monomial& b) { return a.exponents < b.exponents; });
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    if (!out.empty() && out.back().exponents == t.exponents)
      out.back().coefficient += t.coefficient;
    else
      out.push_back(t);
  }
  std::erase_if(out, [](const Monomial& m) { return m.coefficient == 0.0; });
  terms_ = std::move(out);
}

int Polynomial::degree() const {
  int d = 0;
  for (const auto& t : terms_) d = std::max(d, t.exponents[0] + t.exponents[1] + t.exponents[2]);
  return d;
}

double Polynomial::operator()(const Point& p) const {
  double sum = 0.0;
  for (const auto& t : terms_)
    sum += t.coefficient * ipow(p.x1, t.exponents[0]) * ipow(p.x2, t.exponents[1]) * ipow(p.x3, t.exponents[2]);
  return sum;
}

double Polynomial::abs_bound(const Point& p) const {
  double sum = 0.0;
  for (const auto& t : terms_)
    sum += std::abs(t.coefficient) * ipow(std::abs(p.x1), t.exponents[0]) *
           ipow(std::abs(p.x2), t.exponents[1]) * ipow(std::abs(p.x3), t.exponents[2]);
  return sum;
}

Polynomial Polynomial::derivative(int axis) const {
  std::vector<Monomial> out;
  for (const auto& t : terms_) {
    const int e = t.exponents[axis];
    if (e == 0) continue;
    Monomial m = t;
    m.coefficient *= e;
    m.exponents[axis] = e - 1;
    out.push_back(m);
  }
  return Polynomial(std::move(out));
}

Polynomial Polynomial::apply_x() const {
  return derivative(0) + Polynomial::monomial(2.0, 0, 1, 0) * derivative(2);
}

Polynomial Polynomial::apply_y() const {
  return derivative(1) - Polynomial::monomial(2.0, 1, 0, 0) * derivative(2);
}

Polynomial Polynomial::dilated(double lam) const {
  std::vector<Monomial> out = terms_;
  for (auto& m : out) m.coefficient *= ipow(lam, m.exponents[0] + m.exponents[1] + 2 * m.exponents[2]);
  return Polynomial(std::move(out));
}

std::string Polynomial::to_string() const {
  if (terms_.empty()) return "0";
  std::string s;
  char buf[64];
  for (std::size_t i = 0; i < terms_.size(); ++i) {
    const auto& t = terms_[i];
    double c = t.coefficient;
    if (i > 0) {
      s += c < 0.0 ? " - " : " + ";
      c = std::abs(c);
    }
    std::snprintf(buf, sizeof buf, "%.17g", c);
    s += buf;
    bool first_factor = true;
    for (int a = 0; a < 3; ++a) {
      if (t.exponents[a] == 0) continue;
      s += first_factor ? " * x" : " x";
      first_factor = false;
      s += static_cast<char>('1' + a);
      if (t.exponents[a] != 1) s += "^" + std::to_string(t.exponents[a]);
    }
  }
  return s;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  terms_.insert(terms_.end(), o.terms_.begin(), o.terms_.end());
  canonicalize();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) { return *this += (-1.0) * o; }

Polynomial operator*(double s, const Polynomial& a) {
  std::vector<Monomial> out = a.terms_;
  for (auto& m : out) m.coefficient *= s;
  return Polynomial(std::move(out));
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  std::vector<Monomial> out;
  out.reserve(a.terms_.size() * b.terms_.size());
  for (const auto& s : a.terms_)
    for (const auto& t : b.terms_)
      out.push_back({s.coefficient * t.coefficient,
                     {s.exponents[0] + t.exponents[0], s.exponents[1] + t.exponents[1],
                      s.exponents[2] + t.exponents[2]}});
  return Polynomial(std::move(out));
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (a.terms_[i].coefficient != b.terms_[i].coefficient || a.terms_[i].exponents != b.terms_[i].exponents)
      return false;
  return true;
}

}  // namespace heis
