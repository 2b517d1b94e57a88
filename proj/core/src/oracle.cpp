#include "canonconn/oracle.hpp"

#include <algorithm>
#include <map>

namespace canonconn {

namespace {

using Basis = std::shared_ptr<const MonomialBasis>;

Jet zero_jet(const Basis& b) { return Jet(b, static_cast<int>(b->max_degree())); }

// frame of jet fields with the inverse of its coefficient matrix
struct JetFrame {
  std::vector<JetVec> fields;
  JetMat inv;

  explicit JetFrame(std::vector<JetVec> f) : fields(std::move(f)) {
    const std::size_t n = fields.size();
    JetMat m{n, {}};
    for (std::size_t r = 0; r < n; ++r)
      for (std::size_t c = 0; c < n; ++c) m.e.push_back(fields.at(c).at(r));
    inv = inverse(m);
  }
  JetVec coords(const JetVec& v) const { return inv * v; }
};

struct Setup {
  Basis basis;
  std::vector<PolyVec> x;  // horizontal fields
  std::vector<JetVec> xj;
  JetVec jets(const PolyVec& v, const FrameModel& m) const { return to_jets(basis, v, m.point); }
};

Setup make_setup(const FrameModel& model, unsigned degree) {
  Setup s;
  s.basis = MonomialBasis::get(model.dim, degree);
  s.x = model.fields;
  for (const auto& f : s.x) s.xj.push_back(s.jets(f, model));
  return s;
}

void require_dims(const CarnotAlgebra& alg, std::vector<std::size_t> dims, std::string_view model) {
  std::vector<std::size_t> got;
  for (std::size_t l = 1; l <= alg.step(); ++l) got.push_back(alg.layer_dim(l));
  if (got != dims) throw Error(ErrorKind::UnsupportedModel, std::string(model) + ": symbol has the wrong layer dimensions");
}

// n1 x n1 matrices of jets (entry (i, j): X_i coefficient of nabla X_j) -> g_0 coordinates
MuField to_mu(const ExtendedAlgebra& alg, const std::vector<std::vector<Jet>>& omega, std::size_t n1) {
  const std::size_t m = alg.dim_g0();
  Mat g(n1 * n1, m);
  for (std::size_t s = 0; s < m; ++s)
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) g(i * n1 + j, s) = alg.g0_basis()[s](i, j);
  Mat gt = g.transpose();
  Mat left = inverse(gt * g) * gt;
  MuField mu;
  for (const auto& w : omega) {
    Vec at_p;
    for (const auto& e : w) at_p.push_back(e.value());
    Vec c = left * at_p;
    if (g * c != at_p) throw Error(ErrorKind::Inconsistent, "closed-form connection is not g_0-valued");
    std::vector<Jet> row;
    for (std::size_t s = 0; s < m; ++s) {
      Jet v = zero_jet(w.at(0).basis());
      for (std::size_t r = 0; r < w.size(); ++r)
        if (sgn(left(s, r)) != 0) v += left(s, r) * w[r];
      row.push_back(std::move(v));
    }
    mu.push_back(std::move(row));
  }
  return mu;
}

// eta * J on span{X1, X2}, J X1 = X2
std::vector<Jet> rotation(const Jet& eta) {
  return {zero_jet(eta.basis()), -eta, eta, zero_jet(eta.basis())};
}

OracleReport heis23(const Complex& cx, const FrameModel& model, unsigned degree) {
  require_dims(cx.algebra().minus(), {2, 1}, "heis23");
  Setup s = make_setup(model, degree);
  PolyVec w = bracket(s.x[0], s.x[1]);
  JetFrame fr({s.xj[0], s.xj[1], s.jets(w, model)});
  Jet f1 = fr.coords(s.jets(bracket(s.x[0], w), model))[2];
  Jet f2 = fr.coords(s.jets(bracket(s.x[1], w), model))[2];
  Jet a1 = f2, a2 = -f1;
  OracleReport rep;
  rep.model = "heis23";
  rep.structure = {{"f1", f1.value()}, {"f2", f2.value()}, {"alpha1", a1.value()}, {"alpha2", a2.value()}};
  rep.connection = analyze_connection(cx, model, to_mu(cx.algebra(), {rotation(a1), rotation(a2)}, 2));
  return rep;
}

OracleReport rolling(const Complex& cx, const FrameModel& model, unsigned degree) {
  require_dims(cx.algebra().minus(), {2, 1, 2}, "rolling235");
  Setup s = make_setup(model, degree);
  PolyVec w = bracket(s.x[0], s.x[1]);
  PolyVec c1 = bracket(s.x[0], w), c2 = bracket(s.x[1], w);
  JetFrame fr({s.xj[0], s.xj[1], s.jets(w, model), s.jets(c1, model), s.jets(c2, model)});
  // [X_j, [X_j, [X1, X2]]] = f_{1,j} C1 + f_{2,j} C2 mod E^-2
  JetVec k1 = fr.coords(s.jets(bracket(s.x[0], c1), model));
  JetVec k2 = fr.coords(s.jets(bracket(s.x[1], c2), model));
  Jet eta1 = k2[4], eta2 = -k1[3];
  OracleReport rep;
  rep.model = "rolling235";
  rep.structure = {{"f11", k1[3].value()}, {"f21", k1[4].value()}, {"f12", k2[3].value()},
                   {"f22", k2[4].value()}, {"eta1", eta1.value()}, {"eta2", eta2.value()}};
  rep.connection = analyze_connection(cx, model, to_mu(cx.algebra(), {rotation(eta1), rotation(eta2)}, 2));
  return rep;
}

OracleReport free_step2(const Complex& cx, const FrameModel& model, unsigned degree) {
  const auto& minus = cx.algebra().minus();
  if (minus.step() != 2) throw Error(ErrorKind::UnsupportedModel, "free_step2: step must be 2");
  const std::size_t n1 = minus.layer_dim(1);
  require_dims(minus, {n1, n1 * (n1 - 1) / 2}, "free_step2");
  if (n1 < 3) throw Error(ErrorKind::UnsupportedModel, "free_step2: needs n1 >= 3");
  Setup s = make_setup(model, degree);
  Basis b = s.basis;

  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pq;
  std::vector<PolyVec> w;
  std::vector<JetVec> frame = s.xj;
  for (std::size_t p = 0; p < n1; ++p)
    for (std::size_t q = p + 1; q < n1; ++q) {
      pq[{p, q}] = n1 + w.size();
      w.push_back(bracket(s.x[p], s.x[q]));
      frame.push_back(s.jets(w.back(), model));
    }
  JetFrame fr(frame);

  // nu[i][j][k] = coordinates of [X_i, [X_j, X_k]] on the second layer
  std::vector<std::vector<std::vector<JetVec>>> nu(n1, std::vector<std::vector<JetVec>>(n1, std::vector<JetVec>(n1)));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = j + 1; k < n1; ++k) {
        nu[i][j][k] = fr.coords(s.jets(bracket(s.x[i], w[pq.at({j, k}) - n1]), model));
        nu[i][k][j] = nu[i][j][k];
        for (auto& e : nu[i][k][j]) e = -e;
      }
  auto nu_at = [&](std::size_t i, std::size_t j, std::size_t k, std::size_t p, std::size_t q) {
    if (j == k || p == q) return zero_jet(b);
    const Jet& v = nu[i][j][k][pq.at({std::min(p, q), std::max(p, q)})];
    return p < q ? v : -v;
  };
  // nu2(i, j; k) = sum_r nu_{ijr, kr}
  std::vector<Jet> nu2(n1 * n1 * n1, zero_jet(b));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n1; ++k)
        for (std::size_t r = 0; r < n1; ++r) nu2[(i * n1 + j) * n1 + k] += nu_at(i, j, r, k, r);
  auto v2 = [&](std::size_t i, std::size_t j, std::size_t k) -> const Jet& { return nu2[(i * n1 + j) * n1 + k]; };

  const long n = static_cast<long>(n1);
  auto diag = [&](std::size_t i, std::size_t j) {  // mu_{ij;j}, i != j
    if (n1 > 3) return frac(1, n - 3) * (v2(i, j, j) - v2(j, j, i));
    std::size_t k = 3 - i - j;
    return frac(2, 3) * (v2(i, j, j) - v2(j, i, j)) - frac(1, 3) * (v2(i, k, k) - v2(k, i, k));
  };
  auto mu = [&](std::size_t i, std::size_t j, std::size_t k) {
    if (i == j) return zero_jet(b);
    if (k == j) return diag(i, j);
    if (k == i) return -diag(j, i);
    return frac(1, 2 * (n - 1)) * (v2(k, j, i) - v2(k, i, j)) + frac(1, 2 * n * (n - 1)) * (v2(j, i, k) - v2(i, j, k));
  };

  OracleReport rep;
  rep.model = "free_step2";
  std::vector<std::vector<Jet>> omega(n1);
  for (std::size_t k = 0; k < n1; ++k)
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) omega[k].push_back(mu(i, j, k));
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = 0; j < n1; ++j)
      for (std::size_t k = 0; k < n1; ++k)
        rep.structure.push_back({"nu2_" + std::to_string(i + 1) + std::to_string(j + 1) + ";" + std::to_string(k + 1),
                                 v2(i, j, k).value()});
  for (std::size_t i = 0; i < n1; ++i)
    for (std::size_t j = i + 1; j < n1; ++j)
      for (std::size_t k = 0; k < n1; ++k)
        rep.structure.push_back({"mu_" + std::to_string(i + 1) + std::to_string(j + 1) + ";" + std::to_string(k + 1),
                                 omega[k][i * n1 + j].value()});
  rep.connection = analyze_connection(cx, model, to_mu(cx.algebra(), omega, n1));
  return rep;
}

// ---------------------------------------------------------------------------
// contact symbols

struct ContactData {
  std::size_t n1 = 0;
  Mat omega;  // [A_a, A_b] = omega_ab B
  Vec lambda;
  Mat j;      // Lambda^-1 omega, orthogonal complex structure
};

bool rational_sqrt(const Rat& r, Rat& out) {
  if (sgn(r) < 0) return false;
  mpz_class n = r.get_num(), d = r.get_den();
  if (!mpz_perfect_square_p(n.get_mpz_t()) || !mpz_perfect_square_p(d.get_mpz_t())) return false;
  mpz_class sn, sd;
  mpz_sqrt(sn.get_mpz_t(), n.get_mpz_t());
  mpz_sqrt(sd.get_mpz_t(), d.get_mpz_t());
  out = Rat(sn, sd);
  out.canonicalize();
  return true;
}

ContactData contact_data(const CarnotAlgebra& alg) {
  if (alg.step() != 2 || alg.layer_dim(2) != 1 || alg.layer_dim(1) % 2 != 0)
    throw Error(ErrorKind::UnsupportedModel, "contact: symbol is not of Heisenberg type");
  ContactData d;
  d.n1 = alg.layer_dim(1);
  std::vector<std::size_t> idx(d.n1);
  for (std::size_t i = 0; i < d.n1; ++i) idx[i] = i;
  if (!(alg.gram().gram().select(idx, idx) == Mat::identity(d.n1)))
    throw Error(ErrorKind::UnsupportedModel, "contact: the basis of g_-1 must be orthonormal");
  d.omega = Mat(d.n1, d.n1);
  for (std::size_t a = 0; a < d.n1; ++a)
    for (std::size_t b = 0; b < d.n1; ++b) d.omega(a, b) = alg.bracket(a, b)[d.n1];
  Mat sq = d.omega.transpose() * d.omega;
  Rat top;
  for (std::size_t a = 0; a < d.n1; ++a) {
    for (std::size_t b = 0; b < d.n1; ++b)
      if (a != b && sgn(sq(a, b)) != 0)
        throw Error(ErrorKind::UnsupportedModel, "contact: Lambda is not diagonal in the given basis");
    Rat l;
    if (!rational_sqrt(sq(a, a), l) || sgn(l) == 0)
      throw Error(ErrorKind::UnsupportedModel, "contact: eigenvalues of Lambda are not rational");
    d.lambda.push_back(l);
    top = std::max(top, l);
  }
  if (top != 1) throw Error(ErrorKind::UnsupportedModel, "contact: the largest eigenvalue of Lambda must be 1");
  d.j = Mat(d.n1, d.n1);
  for (std::size_t a = 0; a < d.n1; ++a)
    for (std::size_t b = 0; b < d.n1; ++b) d.j(a, b) = d.omega(a, b) / d.lambda[a];
  return d;
}

struct ReebJets {
  JetVec b;     // transverse field with [X_a, X_b] = omega_ab b mod E
  JetVec zdir;  // b + sum_j a_j X_j with [zdir, X_i] in E
  Rat scale;    // Reeb field = scale * zdir
};

ReebJets reeb_jets(const ContactData& d, const Setup& s, const FrameModel& model) {
  const std::size_t n1 = d.n1;
  std::size_t pa = 0, pb = 1;
  while (sgn(d.omega(pa, pb)) == 0) {
    if (++pb == n1) pb = ++pa + 1;
    if (pb >= n1) throw Error(ErrorKind::UnsupportedModel, "contact: degenerate bracket");
  }
  PolyVec bt = Rat(1 / d.omega(pa, pb)) * bracket(s.x[pa], s.x[pb]);
  ReebJets out;
  out.b = s.jets(bt, model);
  std::vector<JetVec> fields = s.xj;
  fields.push_back(out.b);
  JetFrame fr(fields);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = a + 1; b < n1; ++b) {
      Jet c = fr.coords(s.jets(bracket(s.x[a], s.x[b]), model))[n1];
      Jet expect = Jet::constant(s.basis, d.omega(a, b));
      if (!(c - expect).is_zero())
        throw Error(ErrorKind::UnsupportedModel, "contact: the symbol is not constant in the given frame near p");
    }
  // g_i + sum_j a_j omega_ji = 0
  std::vector<Jet> g;
  for (std::size_t i = 0; i < n1; ++i) g.push_back(fr.coords(s.jets(bracket(bt, s.x[i]), model))[n1]);
  Mat ot_inv = inverse(d.omega.transpose());
  out.zdir = out.b;
  for (std::size_t j = 0; j < n1; ++j) {
    Jet a = zero_jet(s.basis);
    for (std::size_t i = 0; i < n1; ++i)
      if (sgn(ot_inv(j, i)) != 0) a -= ot_inv(j, i) * g[i];
    for (std::size_t r = 0; r < model.dim; ++r) out.zdir[r] += a * s.xj[j][r];
  }
  // beta(b) = -1 makes dbeta(X_a, X_b) = omega_ab; beta(Z) = sum_j k[j] lambda[j]
  Rat norm;
  for (const auto& l : d.lambda) norm += l;
  out.scale = -norm / 2;
  return out;
}

OracleReport contact_std(const Complex& cx, const FrameModel& model, unsigned degree) {
  const auto& alg = cx.algebra();
  ContactData d = contact_data(alg.minus());
  if (!std::all_of(d.lambda.begin(), d.lambda.end(), [](const Rat& l) { return l == 1; }))
    throw Error(ErrorKind::UnsupportedModel, "contact_std: symbol is not the standard Heisenberg algebra");
  const std::size_t n1 = d.n1;
  Setup s = make_setup(model, degree);
  ReebJets reeb = reeb_jets(d, s, model);
  std::vector<JetVec> fields = s.xj;
  fields.push_back(reeb.zdir);
  JetFrame fr(fields);
  // h[a][b] = frame coordinates of [X_a, X_b]
  std::vector<std::vector<JetVec>> h(n1, std::vector<JetVec>(n1));
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n1; ++b)
      if (a < b) {
        h[a][b] = fr.coords(s.jets(bracket(s.x[a], s.x[b]), model));
        h[b][a] = h[a][b];
        for (auto& e : h[b][a]) e = -e;
      } else if (a == b) {
        h[a][b] = JetVec(n1 + 1, zero_jet(s.basis));
      }
  // Koszul in an orthonormal frame, projected to E
  std::vector<std::vector<Jet>> omega(n1);
  for (std::size_t k = 0; k < n1; ++k) {
    std::vector<Jet> gam;
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) gam.push_back(frac(1, 2) * (h[k][j][i] - h[j][i][k] + h[i][k][j]));
    // (Gamma - J Gamma J) / 2
    for (std::size_t i = 0; i < n1; ++i)
      for (std::size_t j = 0; j < n1; ++j) {
        Jet v = frac(1, 2) * gam[i * n1 + j];
        for (std::size_t p = 0; p < n1; ++p)
          for (std::size_t q = 0; q < n1; ++q) {
            Rat c = d.j(i, p) * d.j(q, j);
            if (sgn(c) != 0) v -= Rat(c / 2) * gam[p * n1 + q];
          }
        omega[k].push_back(std::move(v));
      }
  }
  OracleReport rep;
  rep.model = "contact_std";
  Vec z = values(reeb.zdir);
  for (std::size_t r = 0; r < z.size(); ++r) rep.structure.push_back({"reeb_" + std::to_string(r + 1), reeb.scale * z[r]});
  rep.connection = analyze_connection(cx, model, to_mu(alg, omega, n1));
  // grading line of the extension equals the Reeb line
  Mat both(model.dim, 2);
  for (std::size_t r = 0; r < model.dim; ++r) {
    both(r, 0) = rep.connection.point.frame(r, n1);
    both(r, 1) = z[r];
  }
  rep.checks.checks.push_back({"grading_is_reeb", rank(both) == 1, {}});
  return rep;
}

}  // namespace

OracleReport closed_form_oracle(const Complex& cx, std::string_view model, const FrameModel& frame, unsigned degree) {
  if (model == "heis23") return heis23(cx, frame, degree);
  if (model == "rolling235") return rolling(cx, frame, degree);
  if (model == "free_step2") return free_step2(cx, frame, degree);
  if (model == "contact_std") return contact_std(cx, frame, degree);
  throw Error(ErrorKind::UnsupportedModel, "no closed form for model \"" + std::string(model) + "\"");
}

Certificate compare_connections(const PointData& a, const PointData& b) {
  Certificate c;
  auto flat = [](const Mat& m) { return Vec(m.entries().begin(), m.entries().end()); };
  auto cat = [](const std::vector<Vec>& vs) {
    Vec out;
    for (const auto& v : vs) out.insert(out.end(), v.begin(), v.end());
    return out;
  };
  auto add = [&](const std::string& name, const Vec& x, const Vec& y) {
    if (x.size() != y.size()) {
      c.checks.push_back({name, false, {}});
      return;
    }
    Vec r = x - y;
    c.checks.push_back({name, is_zero(r), r});
  };
  add("grading_frame", flat(a.frame), flat(b.frame));
  add("connection", flat(a.omega), flat(b.omega));
  add("torsion", cat(a.torsion), cat(b.torsion));
  add("curvature", cat(a.curvature), cat(b.curvature));
  return c;
}

Certificate contact_conditions(const Complex& cx, const PointData& pt) {
  const auto& alg = cx.algebra();
  ContactData d = contact_data(alg.minus());
  const std::size_t n1 = d.n1, dim = alg.dim();
  std::vector<Vec> k(n1 * n1);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n1; ++b) k[a * n1 + b] = evaluate(cx, pt.kappa, std::vector<std::size_t>{a, b});
  // chi~ = 1/2 sum_a lambda_a A_a ^ J A_a
  Vec chi(dim);
  for (std::size_t a = 0; a < n1; ++a)
    for (std::size_t b = 0; b < n1; ++b)
      if (sgn(d.j(b, a)) != 0) chi = chi + Rat(d.lambda[a] * d.j(b, a) / 2) * k[a * n1 + b];
  Certificate c;
  c.checks.push_back({"kappa_chi", is_zero(chi), chi});
  // <A_p, kappa(A_v, sum_b M(b, q) A_b)> for a matrix M
  auto pair = [&](std::size_t p, std::size_t v, std::size_t q, const Mat* m) {
    Rat s;
    if (!m) return k[v * n1 + q][p];
    for (std::size_t b = 0; b < n1; ++b)
      if (sgn((*m)(b, q)) != 0) s += (*m)(b, q) * k[v * n1 + b][p];
    return s;
  };
  Vec cj, sym;
  for (std::size_t v = 0; v < n1; ++v)
    for (std::size_t p = 0; p < n1; ++p)
      for (std::size_t q = 0; q < n1; ++q) {
        if (d.lambda[p] != d.lambda[q]) continue;
        Rat lhs = pair(p, v, q, &d.j), rhs;
        for (std::size_t b = 0; b < n1; ++b)
          if (sgn(d.j(b, p)) != 0) rhs -= d.j(b, p) * k[v * n1 + q][b];
        cj.push_back(lhs - rhs);
        sym.push_back(pair(p, v, q, nullptr) - pair(q, v, p, nullptr));
      }
  c.checks.push_back({"trace_complex", is_zero(cj), cj});
  c.checks.push_back({"trace_symmetric", is_zero(sym), sym});
  return c;
}

Certificate reeb_check(const Complex& cx, const FrameModel& model, const MuField& mu) {
  const auto& alg = cx.algebra();
  require_dims(alg.minus(), {2, 1}, "reeb_check");
  auto conn = extend_connection(alg, model, mu);
  Setup s = make_setup(model, mu.at(0).at(0).basis()->max_degree());
  const JetVec& z = conn.frame.at(2);
  JetFrame fr({conn.frame[0], conn.frame[1], z});
  // beta0 = third row of the inverse frame: kills E, beta0(Z) = 1
  auto beta0 = [&](const JetVec& v) { return fr.coords(v)[2]; };
  // normalized beta = beta0 / h with h = beta0([X1, X2]), so dbeta(X1, X2) = -1
  Jet h = beta0(s.jets(bracket(s.x[0], s.x[1]), model));
  Certificate c;
  Rat hp = h.value();
  // beta(Z) = 1 / h
  c.checks.push_back({"beta_of_z", hp == 1, {hp - 1}});
  // dbeta(Z, X_i) = -X_i(1/h) - beta([Z, X_i]) = (X_i h / h^2) - beta0([Z, X_i]) / h
  Vec res;
  for (std::size_t i = 0; i < 2; ++i) {
    Rat xh = canonconn::apply(conn.frame[i], h).value();
    Rat bz = beta0(bracket(z, conn.frame[i])).value();
    res.push_back(xh / (hp * hp) - bz / hp);
  }
  c.checks.push_back({"dbeta_z", is_zero(res), res});
  return c;
}

Vec reeb_field_at_point(const CarnotAlgebra& alg, const FrameModel& model, unsigned degree) {
  ContactData d = contact_data(alg);
  Setup s = make_setup(model, degree);
  ReebJets r = reeb_jets(d, s, model);
  return r.scale * values(r.zdir);
}

}  // namespace canonconn
