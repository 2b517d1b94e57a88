#include "canonconn/poly.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>

namespace canonconn {

Poly Poly::constant(std::size_t nvars, const Rat& c) {
  Poly p(nvars);
  p.add_term(Exponent(nvars, 0), c);
  return p;
}

Poly Poly::variable(std::size_t nvars, std::size_t i) {
  Poly p(nvars);
  Exponent e(nvars, 0);
  e.at(i) = 1;
  p.add_term(e, 1);
  return p;
}

unsigned Poly::degree() const {
  unsigned d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0u));
  return d;
}

void Poly::add_term(const Exponent& e, const Rat& c) {
  if (e.size() != nvars_) throw Error(ErrorKind::ShapeMismatch, "exponent length differs from variable count");
  if (sgn(c) == 0) return;
  auto [it, inserted] = terms_.try_emplace(e, c);
  if (!inserted) {
    it->second += c;
    if (sgn(it->second) == 0) terms_.erase(it);
  }
}

Poly Poly::derivative(std::size_t i) const {
  Poly out(nvars_);
  for (const auto& [e, c] : terms_) {
    if (e[i] == 0) continue;
    Exponent f = e;
    --f[i];
    out.add_term(f, c * e[i]);
  }
  return out;
}

Rat Poly::evaluate(std::span<const Rat> x) const {
  Rat s;
  for (const auto& [e, c] : terms_) {
    Rat t = c;
    for (std::size_t i = 0; i < nvars_; ++i)
      for (unsigned k = 0; k < e[i]; ++k) t *= x[i];
    s += t;
  }
  return s;
}

Poly operator+(const Poly& a, const Poly& b) {
  Poly out = a;
  out.nvars_ = std::max(a.nvars_, b.nvars_);
  for (const auto& [e, c] : b.terms_) out.add_term(e, c);
  return out;
}

Poly operator-(const Poly& a, const Poly& b) {
  Poly out = a;
  out.nvars_ = std::max(a.nvars_, b.nvars_);
  for (const auto& [e, c] : b.terms_) out.add_term(e, -c);
  return out;
}

Poly operator*(const Poly& a, const Poly& b) {
  Poly out(std::max(a.nvars_, b.nvars_));
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      Exponent e(out.nvars_);
      for (std::size_t i = 0; i < e.size(); ++i) e[i] = ea[i] + eb[i];
      out.add_term(e, ca * cb);
    }
  return out;
}

Poly operator*(const Rat& s, const Poly& a) {
  Poly out(a.nvars_);
  if (sgn(s) == 0) return out;
  for (const auto& [e, c] : a.terms_) out.terms_.emplace(e, s * c);
  return out;
}

// ---------------------------------------------------------------------------

namespace {

struct Parser {
  std::string_view s;
  std::size_t nvars;
  std::size_t pos = 0;

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::Parse, "polynomial \"" + std::string(s) + "\" at column " + std::to_string(pos + 1) + ": " + what);
  }
  void skip() {
    while (pos < s.size() && std::isspace(static_cast<unsigned char>(s[pos]))) ++pos;
  }
  bool eat(char c) {
    skip();
    if (pos < s.size() && s[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }
  std::string digits() {
    skip();
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return std::string(s.substr(start, pos - start));
  }
  // number: digits [ '/' digits ]
  bool number(Rat& out) {
    skip();
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return false;
    std::string num = digits();
    std::string den = "1";
    if (eat('/')) {
      den = digits();
      if (den.empty()) fail("expected denominator");
    }
    out = parse_rat(num + "/" + den);
    return true;
  }
  // factor: number | x<i> [ '^' digits ]
  void factor(Rat& coeff, Exponent& e) {
    Rat c;
    if (number(c)) {
      coeff *= c;
      return;
    }
    skip();
    if (pos >= s.size() || s[pos] != 'x') fail("expected a number or a variable x<i>");
    ++pos;
    std::string idx = digits();
    if (idx.empty()) fail("expected variable index");
    std::size_t i = std::stoul(idx);
    if (i < 1 || i > nvars) fail("variable x" + idx + " out of range 1.." + std::to_string(nvars));
    unsigned power = 1;
    if (eat('^')) {
      std::string p = digits();
      if (p.empty()) fail("expected exponent");
      power = static_cast<unsigned>(std::stoul(p));
    }
    e[i - 1] += power;
  }
  Poly parse() {
    Poly out(nvars);
    skip();
    if (pos >= s.size()) fail("empty polynomial");
    bool first = true;
    while (true) {
      skip();
      if (pos >= s.size()) break;
      Rat coeff = 1;
      if (eat('+')) {
      } else if (eat('-')) {
        coeff = -1;
      } else if (!first) {
        fail("expected '+' or '-'");
      }
      first = false;
      Exponent e(nvars, 0);
      factor(coeff, e);
      while (eat('*')) factor(coeff, e);
      out.add_term(e, coeff);
    }
    return out;
  }
};

}  // namespace

Poly parse_poly(std::string_view text, std::size_t nvars) { return Parser{text, nvars}.parse(); }

std::string to_string(const Poly& p) {
  if (p.is_zero()) return "0";
  std::vector<std::pair<Exponent, Rat>> terms(p.terms().begin(), p.terms().end());
  auto deg = [](const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0u); };
  std::stable_sort(terms.begin(), terms.end(), [&](const auto& a, const auto& b) {
    if (deg(a.first) != deg(b.first)) return deg(a.first) > deg(b.first);
    return a.first > b.first;
  });
  std::string out;
  for (const auto& [e, c] : terms) {
    Rat mag = abs(c);
    if (out.empty())
      out += sgn(c) < 0 ? "-" : "";
    else
      out += sgn(c) < 0 ? " - " : " + ";
    std::string factors;
    for (std::size_t i = 0; i < e.size(); ++i) {
      if (e[i] == 0) continue;
      if (!factors.empty()) factors += "*";
      factors += "x" + std::to_string(i + 1);
      if (e[i] > 1) factors += "^" + std::to_string(e[i]);
    }
    if (factors.empty())
      out += to_string(mag);
    else if (mag == 1)
      out += factors;
    else
      out += to_string(mag) + "*" + factors;
  }
  return out;
}

// ---------------------------------------------------------------------------

PolyVec bracket(const PolyVec& x, const PolyVec& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "vector fields of different dimension");
  const std::size_t n = x.size();
  PolyVec out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(canonconn::apply(x, y[i]) - canonconn::apply(y, x[i]));
  return out;
}

Poly apply(const PolyVec& x, const Poly& f) {
  Poly out(x.size());
  for (std::size_t j = 0; j < x.size(); ++j)
    if (!x[j].is_zero()) out = out + x[j] * f.derivative(j);
  return out;
}

Vec evaluate(const PolyVec& v, std::span<const Rat> point) {
  Vec out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(p.evaluate(point));
  return out;
}

PolyVec operator+(const PolyVec& a, const PolyVec& b) {
  PolyVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

PolyVec operator-(const PolyVec& a, const PolyVec& b) {
  PolyVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

PolyVec operator*(const Rat& s, const PolyVec& a) {
  PolyVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = s * a[i];
  return out;
}

PolyVec operator*(const Poly& f, const PolyVec& a) {
  PolyVec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = f * a[i];
  return out;
}

}  // namespace canonconn
