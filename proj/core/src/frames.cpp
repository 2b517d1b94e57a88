#include "canonconn/frames.hpp"

#include <algorithm>

namespace canonconn {

namespace {

struct LayerInverse {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  Mat linv;  // pairs x layer_dim
};

LayerInverse layer_inverse(const CarnotAlgebra& alg, std::size_t layer) {
  LayerInverse out;
  Mat l = alg.wedge_bracket_map(layer, &out.pairs);
  const Mat& g = alg.gram().gram();
  Mat dom(out.pairs.size(), out.pairs.size());
  for (std::size_t p = 0; p < out.pairs.size(); ++p)
    for (std::size_t q = 0; q < out.pairs.size(); ++q)
      dom(p, q) = wedge_pair(g, out.pairs[p].first, out.pairs[p].second, out.pairs[q].first, out.pairs[q].second);
  std::vector<std::size_t> idx;
  for (std::size_t k = 0; k < alg.layer_dim(layer); ++k) idx.push_back(alg.layer_offset(layer) + k);
  IPSpace cod(g.select(idx, idx));
  out.linv = gram_pinv(l, IPSpace(dom), cod);
  return out;
}

Mat columns_at(const std::vector<PolyVec>& fields, std::span<const Rat> point, std::size_t dim) {
  Mat m(dim, fields.size());
  for (std::size_t c = 0; c < fields.size(); ++c) {
    Vec v = evaluate(fields[c], point);
    for (std::size_t r = 0; r < dim; ++r) m(r, c) = v[r];
  }
  return m;
}

void check_model(const FrameModel& model) {
  if (model.dim == 0 || model.point.size() != model.dim)
    throw Error(ErrorKind::ShapeMismatch, "frame model: point does not match the dimension");
  if (model.fields.empty()) throw Error(ErrorKind::InvalidInput, "frame model has no fields");
  for (const auto& f : model.fields) {
    if (f.size() != model.dim) throw Error(ErrorKind::ShapeMismatch, "frame field with the wrong number of components");
    for (const auto& c : f)
      if (c.nvars() != model.dim) throw Error(ErrorKind::ShapeMismatch, "frame component over the wrong variables");
  }
}

// first derivatives at p, read off the linear coefficients
Rat derivative_at_point(const JetVec& x, const Jet& f) {
  if (f.order() < 1) throw Error(ErrorKind::InvalidInput, "jet evaluated past its valid order; raise the degree cap");
  const auto& b = *f.basis();
  Rat s;
  Exponent e(b.nvars(), 0);
  for (std::size_t j = 0; j < x.size(); ++j) {
    const Rat& xj = x[j].value();
    if (sgn(xj) == 0) continue;
    e[j] = 1;
    s += xj * f.coeff(b.index_of(e));
    e[j] = 0;
  }
  return s;
}

Vec bracket_at_point(const JetVec& x, const JetVec& y) {
  Vec out(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = derivative_at_point(x, y[i]) - derivative_at_point(y, x[i]);
  return out;
}

Rat g0_bracket(const ExtendedAlgebra& alg, std::size_t t, std::size_t u, std::size_t s) {
  const std::size_t n = alg.dim_minus();
  return alg.bracket(n + t, n + u)[n + s];
}

Jet zero_jet(const std::shared_ptr<const MonomialBasis>& b) { return Jet(b, static_cast<int>(b->max_degree())); }

}  // namespace

std::vector<std::size_t> growth_vector(const FrameModel& model) {
  check_model(model);
  std::vector<PolyVec> kept = model.fields;
  std::size_t r = rank(columns_at(kept, model.point, model.dim));
  if (r != model.fields.size()) throw Error(ErrorKind::NotBracketGenerating, "horizontal frame is not independent at the point");
  std::vector<std::size_t> out{r};
  std::vector<PolyVec> newest = kept;
  while (r < model.dim) {
    std::vector<PolyVec> next;
    for (const auto& x : model.fields)
      for (const auto& v : newest) {
        PolyVec br = bracket(x, v);
        kept.push_back(br);
        if (rank(columns_at(kept, model.point, model.dim)) > r + next.size())
          next.push_back(std::move(br));
        else
          kept.pop_back();
      }
    if (next.empty())
      throw Error(ErrorKind::NotBracketGenerating,
                  "bracket flag stabilizes at rank " + std::to_string(r) + " < " + std::to_string(model.dim) + " at the point");
    r += next.size();
    out.push_back(r);
    newest = std::move(next);
  }
  return out;
}

ReferenceFrame reference_frame(const CarnotAlgebra& alg, const FrameModel& model) {
  auto growth = growth_vector(model);
  const std::size_t n = alg.dim();
  if (model.dim != n) throw Error(ErrorKind::SymbolMismatch, "manifold dimension differs from the symbol dimension");
  std::vector<std::size_t> expect;
  std::size_t acc = 0;
  for (std::size_t l = 1; l <= alg.step(); ++l) expect.push_back(acc += alg.layer_dim(l));
  if (growth != expect) throw Error(ErrorKind::SymbolMismatch, "growth vector differs from the symbol's layer dimensions");

  ReferenceFrame ref;
  ref.fields = model.fields;
  for (std::size_t layer = 2; layer <= alg.step(); ++layer) {
    auto li = layer_inverse(alg, layer);
    std::vector<PolyVec> brackets;
    for (auto [a, b] : li.pairs) brackets.push_back(bracket(ref.fields[a], ref.fields[b]));
    for (std::size_t k = 0; k < alg.layer_dim(layer); ++k) {
      PolyVec f(n, Poly(n));
      for (std::size_t p = 0; p < li.pairs.size(); ++p)
        if (sgn(li.linv(p, k)) != 0) f = f + li.linv(p, k) * brackets[p];
      ref.fields.push_back(std::move(f));
    }
  }
  ref.at_point = columns_at(ref.fields, model.point, n);
  if (rank(ref.at_point) != n) throw Error(ErrorKind::SymbolMismatch, "graded frame is degenerate at the point");

  Mat inv = inverse(ref.at_point);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t h = alg.layer_of(a) + alg.layer_of(b);
      if (h > alg.step()) continue;
      Vec c = inv * evaluate(bracket(ref.fields[a], ref.fields[b]), model.point);
      const Vec& want = alg.bracket(a, b);
      for (std::size_t k = 0; k < n; ++k)
        if (alg.layer_of(k) >= h && c[k] != want[k])
          throw Error(ErrorKind::SymbolMismatch, "realized bracket [" + alg.label(a) + ", " + alg.label(b) +
                                                     "] differs from the symbol in the " + alg.label(k) + " component");
    }
  return ref;
}

MuField mu_from_polys(std::shared_ptr<const MonomialBasis> basis, const std::vector<std::vector<Poly>>& mu,
                      std::span<const Rat> point) {
  MuField out;
  for (const auto& row : mu) {
    std::vector<Jet> r;
    for (const auto& p : row) r.push_back(Jet::from_poly(basis, p, point));
    out.push_back(std::move(r));
  }
  return out;
}

MuField zero_mu(std::shared_ptr<const MonomialBasis> basis, const ExtendedAlgebra& alg) {
  return MuField(alg.minus().layer_dim(1), std::vector<Jet>(alg.dim_g0(), zero_jet(basis)));
}

ConnectionJets extend_connection(const ExtendedAlgebra& alg, const FrameModel& model, const MuField& mu) {
  check_model(model);
  const auto& minus = alg.minus();
  const std::size_t n = minus.dim(), n1 = minus.layer_dim(1), m = alg.dim_g0();
  if (model.dim != n || model.fields.size() != n1) throw Error(ErrorKind::ShapeMismatch, "frame does not match the symbol");
  if (mu.size() != n1) throw Error(ErrorKind::ShapeMismatch, "mu needs one row per horizontal field");
  for (const auto& row : mu)
    if (row.size() != m) throw Error(ErrorKind::ShapeMismatch, "mu rows need one entry per g_0 basis element");
  const auto basis = mu.empty() || mu[0].empty() ? MonomialBasis::get(n, 6) : mu[0][0].basis();
  const auto& g0 = alg.g0_basis();

  ConnectionJets conn;
  for (const auto& f : model.fields) conn.frame.push_back(to_jets(basis, f, model.point));
  conn.omega = mu;

  // omega_A . b_B over g_-
  auto act = [&](std::size_t a, std::size_t b) {
    std::vector<Jet> v(n, zero_jet(basis));
    for (std::size_t s = 0; s < m; ++s) {
      if (conn.omega[a][s].is_zero() && conn.omega[a][s].order() >= static_cast<int>(basis->max_degree())) continue;
      for (std::size_t c = 0; c < n; ++c)
        if (sgn(g0[s](c, b)) != 0) v[c] += g0[s](c, b) * conn.omega[a][s];
    }
    return v;
  };
  auto field_of = [&](const std::vector<Jet>& coeffs) {
    JetVec out(n, zero_jet(basis));
    for (std::size_t c = 0; c < n; ++c) {
      if (coeffs[c].is_zero()) {
        for (auto& o : out) o += Jet(basis, coeffs[c].order());
        continue;
      }
      for (std::size_t i = 0; i < n; ++i)
        if (!conn.frame[c][i].is_zero()) out[i] += coeffs[c] * conn.frame[c][i];
    }
    return out;
  };
  auto omega_of = [&](const std::vector<Jet>& coeffs, std::size_t s) {
    Jet out = zero_jet(basis);
    for (std::size_t c = 0; c < n; ++c)
      if (!coeffs[c].is_zero()) out += coeffs[c] * conn.omega[c][s];
      else out += Jet(basis, coeffs[c].order());
    return out;
  };

  for (std::size_t layer = 2; layer <= minus.step(); ++layer) {
    auto li = layer_inverse(minus, layer);
    std::vector<JetVec> fterm;
    std::vector<std::vector<Jet>> oterm;
    for (auto [a, b] : li.pairs) {
      JetVec br = minus.layer_of(a) == 1 && minus.layer_of(b) == 1
                      ? to_jets(basis, bracket(model.fields[a], model.fields[b]), model.point)
                      : bracket(conn.frame[a], conn.frame[b]);
      auto wab = act(a, b), wba = act(b, a);
      JetVec xa = field_of(wab), xb = field_of(wba);
      for (std::size_t i = 0; i < n; ++i) br[i] = br[i] - xa[i] + xb[i];
      fterm.push_back(std::move(br));
      std::vector<Jet> o;
      for (std::size_t s = 0; s < m; ++s) {
        Jet v = canonconn::apply(conn.frame[a], conn.omega[b][s]) - canonconn::apply(conn.frame[b], conn.omega[a][s]);
        for (std::size_t t = 0; t < m; ++t)
          for (std::size_t u = 0; u < m; ++u) {
            Rat c = g0_bracket(alg, t, u, s);
            if (sgn(c) != 0) v += c * (conn.omega[a][t] * conn.omega[b][u]);
          }
        v -= omega_of(wab, s);
        v += omega_of(wba, s);
        o.push_back(std::move(v));
      }
      oterm.push_back(std::move(o));
    }
    for (std::size_t k = 0; k < minus.layer_dim(layer); ++k) {
      JetVec f(n, zero_jet(basis));
      std::vector<Jet> o(m, zero_jet(basis));
      for (std::size_t p = 0; p < li.pairs.size(); ++p) {
        const Rat& c = li.linv(p, k);
        if (sgn(c) == 0) continue;
        for (std::size_t i = 0; i < n; ++i) f[i] += c * fterm[p][i];
        for (std::size_t s = 0; s < m; ++s) o[s] += c * oterm[p][s];
      }
      conn.frame.push_back(std::move(f));
      conn.omega.push_back(std::move(o));
    }
  }
  return conn;
}

PointData evaluate_at_point(const Complex& cx, const ConnectionJets& conn) {
  const auto& alg = cx.algebra();
  const auto& minus = alg.minus();
  const std::size_t n = cx.n(), m = alg.dim_g0();
  const auto& g0 = alg.g0_basis();
  PointData pt;
  pt.frame = Mat(n, n);
  for (std::size_t c = 0; c < n; ++c) {
    Vec v = values(conn.frame[c]);
    for (std::size_t r = 0; r < n; ++r) pt.frame(r, c) = v[r];
  }
  pt.omega = Mat(n, m);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t s = 0; s < m; ++s) pt.omega(a, s) = conn.omega[a][s].value();
  Mat inv = inverse(pt.frame);

  auto act = [&](std::size_t a, std::size_t b) {
    Vec v(n);
    for (std::size_t s = 0; s < m; ++s)
      if (sgn(pt.omega(a, s)) != 0)
        for (std::size_t c = 0; c < n; ++c) v[c] += pt.omega(a, s) * g0[s](c, b);
    return v;
  };

  pt.torsion.assign(n * n, Vec(n));
  pt.curvature.assign(n * n, Vec(m));
  pt.kappa = zero_cochain(cx, 2);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      Vec br = inv * bracket_at_point(conn.frame[a], conn.frame[b]);
      Vec t = act(a, b) - act(b, a) - br;
      Vec r(m);
      for (std::size_t s = 0; s < m; ++s) {
        r[s] = derivative_at_point(conn.frame[a], conn.omega[b][s]) - derivative_at_point(conn.frame[b], conn.omega[a][s]);
        for (std::size_t tt = 0; tt < m; ++tt)
          for (std::size_t u = 0; u < m; ++u) {
            Rat c = g0_bracket(alg, tt, u, s);
            if (sgn(c) != 0) r[s] += c * pt.omega(a, tt) * pt.omega(b, u);
          }
        for (std::size_t c = 0; c < n; ++c) r[s] -= br[c] * pt.omega(c, s);
      }
      pt.torsion[a * n + b] = t;
      pt.torsion[b * n + a] = Rat(-1) * t;
      pt.curvature[a * n + b] = r;
      pt.curvature[b * n + a] = Rat(-1) * r;
      const std::size_t form = cx.forms(2).index_of((1u << a) | (1u << b));
      const Vec& ab = minus.bracket(a, b);
      for (std::size_t c = 0; c < n; ++c) pt.kappa.coeffs[cx.index(2, c, form)] = t[c] + ab[c];
      for (std::size_t s = 0; s < m; ++s) pt.kappa.coeffs[cx.index(2, n + s, form)] = r[s];
    }
  return pt;
}

// ---------------------------------------------------------------------------

std::vector<std::pair<std::size_t, std::size_t>> two_form_pairs(std::size_t n) {
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) out.emplace_back(a, b);
  return out;
}

std::vector<Vec> t0_table(const CarnotAlgebra& alg) {
  const std::size_t n = alg.dim();
  std::vector<Vec> out(n * n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out[a * n + b] = Rat(-1) * alg.bracket(a, b);
  return out;
}

namespace {

Mat pair_gram(const Mat& gram) {
  auto pairs = two_form_pairs(gram.rows());
  Mat g(pairs.size(), pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t q = 0; q < pairs.size(); ++q)
      g(p, q) = wedge_pair(gram, pairs[p].first, pairs[p].second, pairs[q].first, pairs[q].second);
  return g;
}

}  // namespace

Mat jac_projector(const std::vector<Vec>& t0, const Mat& gram) {
  const std::size_t n = gram.rows();
  if (t0.size() != n * n) throw Error(ErrorKind::ShapeMismatch, "T0 table does not match the gram");
  auto pairs = two_form_pairs(n);
  auto pidx = [&](std::size_t a, std::size_t b) {
    std::size_t lo = std::min(a, b), hi = std::max(a, b);
    return lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
  };
  // alpha(u, w) with u = sum_d u_d X_d, as coefficients over the pairs
  auto add = [&](Vec& row, const Vec& u, std::size_t w) {
    for (std::size_t d = 0; d < n; ++d) {
      if (d == w || sgn(u[d]) == 0) continue;
      row[pidx(d, w)] += d < w ? u[d] : -u[d];
    }
  };
  std::vector<Vec> rows;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        Vec row(pairs.size());
        add(row, t0[a * n + b], c);
        add(row, t0[b * n + c], a);
        add(row, t0[c * n + a], b);
        if (!is_zero(row)) rows.push_back(std::move(row));
      }
  Mat cons = rows.empty() ? Mat(0, pairs.size()) : Mat::from_columns(rows, pairs.size()).transpose();
  Mat kernel = rows.empty() ? Mat::identity(pairs.size()) : decompose(cons).kernel_basis;
  if (kernel.cols() == 0) return Mat(pairs.size(), pairs.size());
  return orthogonal_projector(kernel, IPSpace(pair_gram(gram)));
}

Vec jac_projection(const Vec& two_form, const std::vector<Vec>& t0, const Mat& gram) {
  return jac_projector(t0, gram) * two_form;
}

Certificate certify_frame(const Complex& cx, const PointData& pt) {
  const auto& alg = cx.algebra();
  const auto& minus = alg.minus();
  const std::size_t n = cx.n(), m = alg.dim_g0();
  const Mat& g = minus.gram().gram();
  const Mat ginv = inverse(g);
  auto t0 = t0_table(minus);
  auto pairs = two_form_pairs(n);
  Certificate cert;

  // chi = -T0^+ : TM -> wedge^2 TM
  Mat t0m(n, pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p)
    for (std::size_t c = 0; c < n; ++c) t0m(c, p) = t0[pairs[p].first * n + pairs[p].second][c];
  Mat chi = Rat(-1) * gram_pinv(t0m, IPSpace(pair_gram(g)), IPSpace(g));
  Vec res_t, res_r;
  for (std::size_t b = 0; b < n; ++b) {
    Vec t(n), r(m);
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const Rat& c = chi(p, b);
      if (sgn(c) == 0) continue;
      std::size_t i = pairs[p].first * n + pairs[p].second;
      t = t + c * (pt.torsion[i] - t0[i]);
      r = r + c * pt.curvature[i];
    }
    res_t.insert(res_t.end(), t.begin(), t.end());
    res_r.insert(res_r.end(), r.begin(), r.end());
  }
  cert.checks.push_back({"chi_torsion", is_zero(res_t), res_t});
  cert.checks.push_back({"chi_curvature", is_zero(res_r), res_r});

  // T_Jac(v, .) as endomorphisms
  Mat proj = jac_projector(t0, g);
  std::vector<Vec> comp(n, Vec(pairs.size()));
  for (std::size_t c = 0; c < n; ++c) {
    Vec f(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p) f[p] = pt.torsion[pairs[p].first * n + pairs[p].second][c];
    comp[c] = proj * f;
  }
  std::vector<Mat> tjac(n, Mat(n, n));
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [a, b] = pairs[p];
    for (std::size_t c = 0; c < n; ++c) {
      tjac[a](c, b) = comp[c][p];
      tjac[b](c, a) = -comp[c][p];
    }
  }
  Vec res_iso;
  for (std::size_t a = 0; a < minus.layer_dim(1); ++a)
    for (std::size_t s = 0; s < m; ++s) res_iso.push_back(frobenius_pair(tjac[a], alg.g0_basis()[s], g, ginv));
  cert.checks.push_back({"jac_iso", is_zero(res_iso), res_iso});

  Vec res_t0;
  for (std::size_t v = 0; v < n; ++v)
    for (std::size_t w = 0; w < n; ++w) {
      if (minus.layer_of(v) != minus.layer_of(w) + 1) continue;
      Mat t0w(n, n);
      for (std::size_t u = 0; u < n; ++u)
        for (std::size_t c = 0; c < n; ++c) t0w(c, u) = t0[w * n + u][c];
      res_t0.push_back(frobenius_pair(tjac[v], t0w, g, ginv));
    }
  cert.checks.push_back({"jac_t0", is_zero(res_t0), res_t0});
  return cert;
}

// ---------------------------------------------------------------------------

Vec alpha_1_at_point(const Complex& cx, const PointData& pt) {
  Normalizer nz(cx);
  Cochain k1 = homogeneous_part(cx, pt.kappa, 1);
  Vec in;
  for (auto i : nz.inputs()) in.push_back(k1.coeffs[i]);
  return nz.solution_operator() * in;
}

namespace {

ConnectionReport finish(const Complex& cx, const FrameModel& model, ConnectionReport rep) {
  const auto& alg = cx.algebra();
  auto conn = extend_connection(alg, model, rep.mu);
  rep.point = evaluate_at_point(cx, conn);
  auto basis = rep.mu.at(0).at(0).basis();
  rep.reference_point = evaluate_at_point(cx, extend_connection(alg, model, zero_mu(basis, alg)));
  rep.cartan = certify(cx, rep.point.kappa);
  rep.manifold = certify_frame(cx, rep.point);
  bool same = rep.reference_point.frame == rep.reference.at_point;
  rep.consistency.checks.push_back({"reference_frame", same, {}});
  return rep;
}

}  // namespace

ConnectionReport analyze_connection(const Complex& cx, const FrameModel& model, const std::vector<std::vector<Poly>>& mu,
                                    unsigned degree) {
  check_model(model);
  return analyze_connection(cx, model, mu_from_polys(MonomialBasis::get(model.dim, degree), mu, model.point));
}

ConnectionReport analyze_connection(const Complex& cx, const FrameModel& model, const MuField& mu) {
  const auto& alg = cx.algebra();
  if (mu.size() != alg.minus().layer_dim(1) || mu.empty() || mu[0].size() != alg.dim_g0())
    throw Error(ErrorKind::ShapeMismatch, "mu must be n1 x dim g_0");
  ConnectionReport rep;
  rep.degree = mu[0][0].basis()->max_degree();
  rep.growth = growth_vector(model);
  rep.reference = reference_frame(alg.minus(), model);
  rep.mu = mu;
  rep = finish(cx, model, std::move(rep));
  rep.alpha_1 = zero_cochain(cx, 1);
  Normalizer nz(cx);
  Vec a = alpha_1_at_point(cx, rep.point);
  for (std::size_t i = 0; i < a.size(); ++i) rep.alpha_1.coeffs[nz.unknowns()[i]] = a[i];
  rep.kappa_tilde_1 = homogeneous_part(cx, rep.reference_point.kappa, 1);
  return rep;
}

ConnectionReport solve_canonical(const Complex& cx, const FrameModel& model, unsigned degree) {
  const auto& alg = cx.algebra();
  const auto& minus = alg.minus();
  const std::size_t n = cx.n(), n1 = minus.layer_dim(1), m = alg.dim_g0();
  ConnectionReport rep;
  rep.degree = degree;
  rep.growth = growth_vector(model);
  rep.reference = reference_frame(minus, model);
  auto basis = MonomialBasis::get(model.dim, degree);

  // kappa~_1 near p from the flat reference: -(frame coordinates of [X~_A, X~_B]) one layer up
  JetMat fr{n, {}};
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) fr.e.push_back(Jet::from_poly(basis, rep.reference.fields[c][r], model.point));
  JetMat finv = inverse(fr);
  Normalizer nz(cx);
  const auto& inputs = nz.inputs();
  std::vector<Jet> kt(inputs.size(), zero_jet(basis));
  auto input_pos = [&](std::size_t flat) {
    auto it = std::lower_bound(inputs.begin(), inputs.end(), flat);
    if (it == inputs.end() || *it != flat) throw Error(ErrorKind::InvalidInput, "index outside the homogeneity-1 slice");
    return static_cast<std::size_t>(it - inputs.begin());
  };
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      std::size_t h = minus.layer_of(a) + minus.layer_of(b) - 1;
      if (h > minus.step()) continue;
      JetVec coords = finv * to_jets(basis, bracket(rep.reference.fields[a], rep.reference.fields[b]), model.point);
      const std::size_t form = cx.forms(2).index_of((1u << a) | (1u << b));
      for (std::size_t k = 0; k < minus.layer_dim(h); ++k) {
        std::size_t c = minus.layer_offset(h) + k;
        kt[input_pos(cx.index(2, c, form))] = -coords[c];
      }
    }
  rep.kappa_tilde_1 = zero_cochain(cx, 2);
  for (std::size_t i = 0; i < inputs.size(); ++i) rep.kappa_tilde_1.coeffs[inputs[i]] = kt[i].value();
  auto sol = nz.solve_alpha1(rep.kappa_tilde_1);  // Inconsistent / NonUniqueSolution propagate
  rep.alpha_1 = sol.alpha_1;

  const Mat& s = nz.solution_operator();
  const auto& unknowns = nz.unknowns();
  rep.mu.assign(n1, std::vector<Jet>(m, zero_jet(basis)));
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t sg = 0; sg < m; ++sg) {
      std::size_t flat = cx.index(1, n + sg, cx.forms(1).index_of(1u << a));
      auto it = std::lower_bound(unknowns.begin(), unknowns.end(), flat);
      std::size_t row = static_cast<std::size_t>(it - unknowns.begin());
      Jet v = zero_jet(basis);
      for (std::size_t i = 0; i < inputs.size(); ++i)
        if (sgn(s(row, i)) != 0) v += s(row, i) * kt[i];
      rep.mu[a][sg] = std::move(v);
    }

  rep = finish(cx, model, std::move(rep));

  Cochain k1 = homogeneous_part(cx, rep.point.kappa, 1);
  Vec affine = cx.d(1) * rep.alpha_1.coeffs + rep.kappa_tilde_1.coeffs;
  rep.consistency.checks.push_back({"kappa_1_affine", k1.coeffs == affine, k1.coeffs - affine});
  Cochain kr = homogeneous_part(cx, rep.reference_point.kappa, 1);
  rep.consistency.checks.push_back(
      {"reference_kappa_1", kr.coeffs == rep.kappa_tilde_1.coeffs, kr.coeffs - rep.kappa_tilde_1.coeffs});

  // X~_B - X_B = sum_C alpha(b_B)^C X_C; its component one layer up is alpha_1(b_B)
  Mat inv = inverse(rep.point.frame);
  Vec grading;
  for (std::size_t b = n1; b < n; ++b) {
    Vec diff(n);
    for (std::size_t r = 0; r < n; ++r) diff[r] = rep.reference.at_point(r, b) - rep.point.frame(r, b);
    Vec c = inv * diff;
    Vec a = evaluate(cx, rep.alpha_1, std::vector<std::size_t>{b});
    for (std::size_t k = 0; k < n; ++k)
      if (minus.layer_of(k) + 1 == minus.layer_of(b)) grading.push_back(c[k] - a[k]);
  }
  rep.consistency.checks.push_back({"grading_correction", is_zero(grading), grading});

  Vec again = alpha_1_at_point(cx, rep.point);
  rep.consistency.checks.push_back({"idempotent", is_zero(again), again});
  return rep;
}

}  // namespace canonconn
