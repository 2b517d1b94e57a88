#include "canonconn/jet.hpp"

#include <algorithm>
#include <map>
#include <mutex>

namespace canonconn {

namespace {

void enumerate(std::size_t nvars, unsigned total, std::size_t var, Exponent& cur, std::vector<Exponent>& out) {
  if (var + 1 == nvars) {
    cur[var] = total;
    out.push_back(cur);
    return;
  }
  for (unsigned k = total + 1; k-- > 0;) {
    cur[var] = k;
    enumerate(nvars, total - k, var + 1, cur, out);
  }
  cur[var] = 0;
}

}  // namespace

MonomialBasis::MonomialBasis(std::size_t nvars, unsigned max_degree) : nvars_(nvars), max_degree_(max_degree) {
  if (nvars == 0) throw Error(ErrorKind::InvalidInput, "jets need at least one variable");
  if (nvars > 12 || max_degree > 31) throw Error(ErrorKind::InvalidInput, "jets support at most 12 variables and degree 31");
  for (unsigned d = 0; d <= max_degree; ++d) {
    Exponent cur(nvars, 0);
    enumerate(nvars, d, 0, cur, exps_);
  }
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    std::uint64_t code = 0;
    unsigned d = 0;
    for (std::size_t v = 0; v < nvars; ++v) {
      code |= static_cast<std::uint64_t>(exps_[i][v]) << (5 * v);
      d += exps_[i][v];
    }
    code_.push_back(code);
    deg_.push_back(d);
    lookup_.emplace(code, static_cast<int>(i));
  }
  prefix_.assign(max_degree + 2, 0);
  for (std::size_t i = 0; i < exps_.size(); ++i) prefix_[deg_[i] + 1] = i + 1;
  low_.assign(exps_.size() * nvars, -1);
  for (std::size_t i = 0; i < exps_.size(); ++i)
    for (std::size_t v = 0; v < nvars; ++v)
      if (exps_[i][v] > 0) low_[i * nvars + v] = lookup_.at(code_[i] - (std::uint64_t{1} << (5 * v)));
}

int MonomialBasis::product(std::size_t i, std::size_t j) const {
  if (deg_[i] + deg_[j] > max_degree_) return -1;
  return lookup_.at(code_[i] + code_[j]);
}

std::size_t MonomialBasis::prefix(int d) const {
  if (d < 0) return 0;
  return prefix_[std::min<std::size_t>(static_cast<std::size_t>(d), max_degree_) + 1];
}

std::shared_ptr<const MonomialBasis> MonomialBasis::get(std::size_t nvars, unsigned max_degree) {
  static std::mutex mu;
  static std::map<std::pair<std::size_t, unsigned>, std::shared_ptr<const MonomialBasis>> cache;
  std::lock_guard lock(mu);
  auto& slot = cache[{nvars, max_degree}];
  if (!slot) slot = std::make_shared<MonomialBasis>(nvars, max_degree);
  return slot;
}

std::size_t MonomialBasis::index_of(const Exponent& e) const {
  std::uint64_t code = 0;
  unsigned d = 0;
  for (std::size_t v = 0; v < nvars_; ++v) {
    code |= static_cast<std::uint64_t>(e.at(v)) << (5 * v);
    d += e[v];
  }
  auto it = d <= max_degree_ ? lookup_.find(code) : lookup_.end();
  if (it == lookup_.end()) throw Error(ErrorKind::InvalidInput, "monomial beyond the jet degree");
  return static_cast<std::size_t>(it->second);
}

// ---------------------------------------------------------------------------

Jet::Jet(std::shared_ptr<const MonomialBasis> basis, int order)
    : basis_(std::move(basis)), order_(std::min<int>(order, static_cast<int>(basis_->max_degree()))) {}

Jet Jet::constant(std::shared_ptr<const MonomialBasis> basis, const Rat& c) {
  int n = static_cast<int>(basis->max_degree());
  Jet j(std::move(basis), n);
  if (sgn(c) != 0) j.t_.emplace_back(0, c);
  return j;
}

Jet Jet::from_poly(std::shared_ptr<const MonomialBasis> basis, const Poly& f, std::span<const Rat> point) {
  const std::size_t nv = basis->nvars();
  if (f.nvars() != nv || point.size() != nv) throw Error(ErrorKind::ShapeMismatch, "jet / polynomial dimension mismatch");
  Jet out(basis, static_cast<int>(basis->max_degree()));
  const unsigned nmax = basis->max_degree();
  std::map<std::uint32_t, Rat> acc_all;
  for (const auto& [e, c] : f.terms()) {
    // prod_v (p_v + h_v)^{e_v}, expanded one variable at a time
    std::vector<std::pair<Exponent, Rat>> acc{{Exponent(nv, 0), c}};
    for (std::size_t v = 0; v < nv; ++v) {
      if (e[v] == 0) continue;
      std::vector<std::pair<Exponent, Rat>> next;
      Rat binom = 1;
      for (unsigned k = 0; k <= e[v]; ++k) {
        if (k > 0) binom = binom * Rat(e[v] - k + 1) / Rat(k);
        Rat pw = 1;
        for (unsigned t = k; t < e[v]; ++t) pw *= point[v];
        if (sgn(pw) == 0) continue;
        for (const auto& [ex, cc] : acc) {
          Exponent ne = ex;
          ne[v] += k;
          unsigned d = 0;
          for (auto x : ne) d += x;
          if (d > nmax) continue;
          next.emplace_back(ne, cc * binom * pw);
        }
      }
      acc = std::move(next);
    }
    for (const auto& [ex, cc] : acc) acc_all[static_cast<std::uint32_t>(basis->index_of(ex))] += cc;
  }
  for (auto& [i, c] : acc_all)
    if (sgn(c) != 0) out.t_.emplace_back(i, std::move(c));
  return out;
}

Rat Jet::coeff(std::size_t i) const {
  auto it = std::lower_bound(t_.begin(), t_.end(), i, [](const auto& t, std::size_t k) { return t.first < k; });
  return it != t_.end() && it->first == i ? it->second : Rat(0);
}

void Jet::set_coeff(std::size_t i, const Rat& c) {
  auto it = std::lower_bound(t_.begin(), t_.end(), i, [](const auto& t, std::size_t k) { return t.first < k; });
  if (it != t_.end() && it->first == i) {
    if (sgn(c) == 0)
      t_.erase(it);
    else
      it->second = c;
  } else if (sgn(c) != 0) {
    t_.emplace(it, static_cast<std::uint32_t>(i), c);
  }
}

const Rat& Jet::value() const {
  static const Rat zero;
  if (order_ < 0) throw Error(ErrorKind::InvalidInput, "jet evaluated past its valid order; raise the degree cap");
  return !t_.empty() && t_.front().first == 0 ? t_.front().second : zero;
}

void Jet::truncate() {
  const std::size_t end = basis_->prefix(order_);
  while (!t_.empty() && t_.back().first >= end) t_.pop_back();
}

Jet Jet::derivative(std::size_t v) const {
  Jet out(basis_, order_ - 1);
  const std::size_t end = basis_->prefix(out.order_);
  for (const auto& [i, c] : t_) {
    int k = basis_->lower(i, v);
    if (k < 0 || static_cast<std::size_t>(k) >= end) continue;
    out.t_.emplace_back(static_cast<std::uint32_t>(k), c * basis_->exponent(i)[v]);
  }
  std::sort(out.t_.begin(), out.t_.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  return out;
}

namespace {

// merge b * sign into a (both sorted), dropping indices >= end
void merge(std::vector<std::pair<std::uint32_t, Rat>>& a, const std::vector<std::pair<std::uint32_t, Rat>>& b, bool negate,
           std::size_t end) {
  std::vector<std::pair<std::uint32_t, Rat>> out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      if (a[i].first < end) out.push_back(std::move(a[i]));
      ++i;
    } else if (i == a.size() || b[j].first < a[i].first) {
      if (b[j].first < end) out.emplace_back(b[j].first, negate ? Rat(-b[j].second) : b[j].second);
      ++j;
    } else {
      if (a[i].first < end) {
        Rat c = negate ? Rat(a[i].second - b[j].second) : Rat(a[i].second + b[j].second);
        if (sgn(c) != 0) out.emplace_back(a[i].first, std::move(c));
      }
      ++i, ++j;
    }
  }
  a = std::move(out);
}

}  // namespace

Jet& Jet::operator+=(const Jet& o) {
  if (!basis_) return *this = o;
  if (!o.basis_) return *this;
  order_ = std::min(order_, o.order_);
  merge(t_, o.t_, false, basis_->prefix(order_));
  return *this;
}

Jet& Jet::operator-=(const Jet& o) {
  if (!o.basis_) return *this;
  if (!basis_) return *this = -o;
  order_ = std::min(order_, o.order_);
  merge(t_, o.t_, true, basis_->prefix(order_));
  return *this;
}

Jet operator-(const Jet& a) {
  Jet out = a;
  for (auto& [i, c] : out.t_) c = -c;
  return out;
}

Jet operator*(const Jet& a, const Jet& b) {
  Jet out(a.basis_, std::min(a.order_, b.order_));
  if (a.t_.empty() || b.t_.empty()) return out;
  const auto& bs = *a.basis_;
  const std::size_t end = bs.prefix(out.order_);
  thread_local std::vector<mpq_class> scratch;
  thread_local std::vector<char> used;
  thread_local std::vector<std::uint32_t> touched;
  if (scratch.size() < bs.size()) {
    scratch.resize(bs.size());
    used.resize(bs.size());
  }
  touched.clear();
  mpq_class t;
  for (const auto& [i, ca] : a.t_) {
    if (i >= end) break;
    for (const auto& [j, cb] : b.t_) {
      int k = bs.product(i, j);
      if (k < 0 || static_cast<std::size_t>(k) >= end) continue;
      mpq_mul(t.get_mpq_t(), ca.get_mpq_t(), cb.get_mpq_t());
      if (!used[static_cast<std::size_t>(k)]) {
        used[static_cast<std::size_t>(k)] = 1;
        touched.push_back(static_cast<std::uint32_t>(k));
        scratch[static_cast<std::size_t>(k)] = t;
      } else {
        scratch[static_cast<std::size_t>(k)] += t;
      }
    }
  }
  std::sort(touched.begin(), touched.end());
  out.t_.reserve(touched.size());
  for (auto k : touched) {
    used[k] = 0;
    if (sgn(scratch[k]) != 0) out.t_.emplace_back(k, scratch[k]);
  }
  return out;
}

Jet operator*(const Rat& s, const Jet& a) {
  Jet out = a;
  if (sgn(s) == 0) {
    out.t_.clear();
    return out;
  }
  for (auto& [i, c] : out.t_) c *= s;
  return out;
}

// ---------------------------------------------------------------------------

JetVec to_jets(std::shared_ptr<const MonomialBasis> basis, const PolyVec& v, std::span<const Rat> point) {
  JetVec out;
  out.reserve(v.size());
  for (const auto& p : v) out.push_back(Jet::from_poly(basis, p, point));
  return out;
}

Jet apply(const JetVec& x, const Jet& f) {
  Jet out(f.basis(), f.order() - 1);
  for (std::size_t j = 0; j < x.size(); ++j) {
    if (x[j].is_zero()) {
      if (x[j].order() < out.order()) out += Jet(f.basis(), x[j].order());
      continue;
    }
    out += x[j] * f.derivative(j);
  }
  return out;
}

JetVec bracket(const JetVec& x, const JetVec& y) {
  if (x.size() != y.size()) throw Error(ErrorKind::ShapeMismatch, "vector fields of different dimension");
  JetVec out;
  out.reserve(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out.push_back(canonconn::apply(x, y[i]) - canonconn::apply(y, x[i]));
  return out;
}

Vec values(const JetVec& v) {
  Vec out;
  out.reserve(v.size());
  for (const auto& j : v) out.push_back(j.value());
  return out;
}

int min_order(const JetVec& v) {
  int o = 1 << 20;
  for (const auto& j : v) o = std::min(o, j.order());
  return o;
}

JetMat inverse(const JetMat& m) {
  const std::size_t n = m.n;
  auto basis = m.e.at(0).basis();
  Mat m0(n, n);
  int order = 1 << 20;
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      m0(r, c) = m(r, c).value();
      order = std::min(order, m(r, c).order());
    }
  Mat inv0 = inverse(m0);  // throws Singular
  // N = -inv0 (m - m0), nilpotent up to the max degree: m^-1 = sum_k N^k inv0
  JetMat nn{n, std::vector<Jet>(n * n, Jet(basis, order))};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c)
      for (std::size_t k = 0; k < n; ++k) {
        if (sgn(inv0(r, k)) == 0) continue;
        Jet h = m(k, c);
        h.set_coeff(0, 0);
        nn(r, c) -= inv0(r, k) * h;
      }
  JetMat base{n, {}};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Jet j = Jet::constant(basis, inv0(r, c));
      base.e.push_back(j + Jet(basis, order));
    }
  JetMat acc = base;
  for (unsigned step = 0; step < basis->max_degree(); ++step) {
    JetMat next = base;
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t k = 0; k < n; ++k) {
        if (nn(r, k).is_zero()) continue;
        for (std::size_t c = 0; c < n; ++c)
          if (!acc(k, c).is_zero()) next(r, c) += nn(r, k) * acc(k, c);
      }
    acc = std::move(next);
  }
  return acc;
}

JetVec operator*(const JetMat& m, const JetVec& v) {
  JetVec out;
  for (std::size_t r = 0; r < m.n; ++r) {
    Jet s(v.at(0).basis(), std::min(min_order(v), m(r, 0).order()));
    for (std::size_t c = 0; c < m.n; ++c)
      if (!m(r, c).is_zero() && !v[c].is_zero()) s += m(r, c) * v[c];
      else s += Jet(v[c].basis(), std::min(m(r, c).order(), v[c].order()));
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace canonconn
