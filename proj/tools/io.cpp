#include "io.hpp"

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>

#include "canonconn/errors.hpp"
#include "canonconn/oracle.hpp"
#include "canonconn/poly.hpp"

namespace canonconn::io {

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::Parse, where + ": " + what);
}

const json& field(const json& doc, const char* key, const std::string& where) {
  if (!doc.is_object()) bad(where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) bad(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::size_t as_size(const json& v, const std::string& where) {
  if (!v.is_number_unsigned()) bad(where, "expected a non-negative integer");
  return v.get<std::size_t>();
}

std::string as_string(const json& v, const std::string& where) {
  if (!v.is_string()) bad(where, "expected a string");
  return v.get<std::string>();
}

Rat as_rat(const json& v, const std::string& where) {
  std::string s = as_string(v, where);
  try {
    return parse_rat(s);
  } catch (const Error& e) {
    bad(where, e.what());
  }
}

const json& as_array(const json& v, const std::string& where, std::size_t expect = SIZE_MAX) {
  if (!v.is_array()) bad(where, "expected an array");
  if (expect != SIZE_MAX && v.size() != expect)
    bad(where, "expected " + std::to_string(expect) + " entries, got " + std::to_string(v.size()));
  return v;
}

// "b_3" or "b3", 1-based
std::size_t basis_index(const json& v, std::size_t n, const std::string& where) {
  std::string s = as_string(v, where);
  std::size_t pos = 0;
  if (s.empty() || s[0] != 'b') bad(where, "basis element must look like b_<k>");
  pos = s.size() > 1 && s[1] == '_' ? 2 : 1;
  std::size_t k = 0;
  if (pos >= s.size()) bad(where, "basis element must look like b_<k>");
  for (; pos < s.size(); ++pos) {
    if (s[pos] < '0' || s[pos] > '9') bad(where, "basis element must look like b_<k>");
    k = k * 10 + static_cast<std::size_t>(s[pos] - '0');
  }
  if (k < 1 || k > n) bad(where, "basis element " + s + " out of range 1.." + std::to_string(n));
  return k - 1;
}

std::string hex64(std::uint64_t h) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

json error_json(const Error& e) {
  json j;
  j["kind"] = std::string(to_string(e.kind()));
  j["message"] = e.what();
  return j;
}

int exit_code_for(const Error& e) { return e.kind() == ErrorKind::Inconsistent ? 2 : 1; }

json skeleton(const char* command) {
  json r;
  r["command"] = command;
  r["inputs"] = json::object();
  return r;
}

std::string g_label(const ExtendedAlgebra& alg, std::size_t a) {
  return a < alg.dim_minus() ? alg.minus().label(a) : "s" + std::to_string(a - alg.dim_minus() + 1);
}

json cochain_json(const Complex& cx, const Cochain& c) {
  json out = json::array();
  const auto& forms = cx.forms(c.k);
  for (std::size_t i = 0; i < c.coeffs.size(); ++i) {
    if (sgn(c.coeffs[i]) == 0) continue;
    std::size_t a = i / forms.size(), f = i % forms.size();
    json e;
    e["value"] = g_label(cx.algebra(), a);
    json form = json::array();
    for (auto b : forms.indices[f]) form.push_back(cx.algebra().minus().label(b));
    e["form"] = form;
    e["coeff"] = to_string(c.coeffs[i]);
    out.push_back(e);
  }
  return out;
}

json pairs_json(const ExtendedAlgebra& alg, const std::vector<Vec>& table) {
  const std::size_t n = alg.dim_minus();
  json out = json::array();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b) {
      const Vec& v = table[a * n + b];
      if (is_zero(v)) continue;
      json e;
      e["args"] = json::array({alg.minus().label(a), alg.minus().label(b)});
      e["value"] = rat_vec(v);
      out.push_back(e);
    }
  return out;
}

struct LoadedAlgebra {
  std::string bytes;
  CarnotSpec spec;
};

LoadedAlgebra load_algebra(const std::filesystem::path& path) {
  LoadedAlgebra out;
  out.bytes = read_file(path);
  out.spec = algebra_from_json(parse_json(out.bytes, path.filename().string()));
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

CarnotSpec algebra_from_json(const json& doc) {
  CarnotSpec spec;
  spec.step = as_size(field(doc, "step", "algebra"), "step");
  const json& dims = as_array(field(doc, "layer_dims", "algebra"), "layer_dims");
  for (std::size_t i = 0; i < dims.size(); ++i) spec.layer_dims.push_back(as_size(dims[i], "layer_dims[" + std::to_string(i) + "]"));
  std::size_t n = 0;
  for (auto d : spec.layer_dims) n += d;
  if (spec.layer_dims.empty()) bad("layer_dims", "must not be empty");

  const json& brs = as_array(field(doc, "brackets", "algebra"), "brackets");
  for (std::size_t i = 0; i < brs.size(); ++i) {
    std::string w = "brackets[" + std::to_string(i) + "]";
    BracketEntry e;
    e.left = basis_index(field(brs[i], "left", w), n, w + ".left");
    e.right = basis_index(field(brs[i], "right", w), n, w + ".right");
    e.result = Vec(n);
    const json& res = field(brs[i], "result", w);
    if (!res.is_object()) bad(w + ".result", "expected an object");
    for (auto it = res.begin(); it != res.end(); ++it) {
      std::string wk = w + ".result." + it.key();
      e.result[basis_index(json(it.key()), n, wk)] += as_rat(it.value(), wk);
    }
    spec.brackets.push_back(std::move(e));
  }

  const std::size_t n1 = spec.layer_dims[0];
  const json& g = as_array(field(doc, "gram_minus1", "algebra"), "gram_minus1", n1);
  spec.gram_minus1 = Mat(n1, n1);
  for (std::size_t r = 0; r < n1; ++r) {
    std::string w = "gram_minus1[" + std::to_string(r) + "]";
    const json& row = as_array(g[r], w, n1);
    for (std::size_t c = 0; c < n1; ++c) spec.gram_minus1(r, c) = as_rat(row[c], w + "[" + std::to_string(c) + "]");
  }

  if (auto it = doc.find("labels"); it != doc.end()) {
    const json& ls = as_array(*it, "labels", n);
    for (std::size_t i = 0; i < n; ++i) spec.labels.push_back(as_string(ls[i], "labels[" + std::to_string(i) + "]"));
  }
  return spec;
}

json algebra_to_json(const CarnotSpec& spec) {
  json doc;
  doc["step"] = spec.step;
  doc["layer_dims"] = spec.layer_dims;
  json brs = json::array();
  for (const auto& e : spec.brackets) {
    json b;
    b["left"] = "b_" + std::to_string(e.left + 1);
    b["right"] = "b_" + std::to_string(e.right + 1);
    json res = json::object();
    for (std::size_t k = 0; k < e.result.size(); ++k)
      if (sgn(e.result[k]) != 0) res["b_" + std::to_string(k + 1)] = to_string(e.result[k]);
    b["result"] = res;
    brs.push_back(b);
  }
  doc["brackets"] = brs;
  doc["gram_minus1"] = rat_mat(spec.gram_minus1);
  if (!spec.labels.empty()) doc["labels"] = spec.labels;
  return doc;
}

FrameFile frame_from_json(const json& doc, const std::filesystem::path& base_dir) {
  FrameFile out;
  const std::size_t n = as_size(field(doc, "dim", "frame"), "dim");
  out.model.dim = n;
  const json& fs = as_array(field(doc, "fields", "frame"), "fields");
  for (std::size_t i = 0; i < fs.size(); ++i) {
    std::string w = "fields[" + std::to_string(i) + "]";
    const json& comps = as_array(fs[i], w, n);
    PolyVec v;
    for (std::size_t c = 0; c < n; ++c) {
      std::string wc = w + "[" + std::to_string(c) + "]";
      try {
        v.push_back(parse_poly(as_string(comps[c], wc), n));
      } catch (const Error& e) {
        bad(wc, e.what());
      }
    }
    out.model.fields.push_back(std::move(v));
  }
  const json& pt = as_array(field(doc, "point", "frame"), "point", n);
  for (std::size_t i = 0; i < n; ++i) out.model.point.push_back(as_rat(pt[i], "point[" + std::to_string(i) + "]"));

  const json& sym = field(doc, "symbol", "frame");
  if (sym.is_string()) {
    out.symbol_path = sym.get<std::string>();
    out.symbol = load_algebra(base_dir / out.symbol_path).spec;
  } else if (sym.is_object()) {
    out.symbol = algebra_from_json(sym);
  } else {
    bad("symbol", "expected a path or an algebra object");
  }
  if (auto it = doc.find("degree"); it != doc.end()) out.degree = static_cast<unsigned>(as_size(*it, "degree"));
  if (auto it = doc.find("oracle"); it != doc.end()) out.oracle = as_string(*it, "oracle");
  if (out.model.fields.size() != out.symbol.layer_dims[0])
    throw Error(ErrorKind::ShapeMismatch, "frame has " + std::to_string(out.model.fields.size()) +
                                              " fields but the symbol's first layer has dimension " +
                                              std::to_string(out.symbol.layer_dims[0]));
  return out;
}

json frame_to_json(const FrameFile& frame) {
  json doc;
  doc["dim"] = frame.model.dim;
  json fs = json::array();
  for (const auto& v : frame.model.fields) {
    json comps = json::array();
    for (const auto& p : v) comps.push_back(to_string(p));
    fs.push_back(comps);
  }
  doc["fields"] = fs;
  doc["point"] = rat_vec(frame.model.point);
  if (frame.symbol_path.empty())
    doc["symbol"] = algebra_to_json(frame.symbol);
  else
    doc["symbol"] = frame.symbol_path;
  if (frame.degree != 6) doc["degree"] = frame.degree;
  if (!frame.oracle.empty()) doc["oracle"] = frame.oracle;
  return doc;
}

Cochain kappa_from_json(const json& doc, const Complex& cx) {
  Cochain c = zero_cochain(cx, 2);
  const json& cs = as_array(field(doc, "coeffs", "kappa"), "coeffs", c.coeffs.size());
  for (std::size_t i = 0; i < cs.size(); ++i) c.coeffs[i] = as_rat(cs[i], "coeffs[" + std::to_string(i) + "]");
  return c;
}

std::uint64_t fnv1a64(std::string_view bytes, std::uint64_t h) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json parse_json(std::string_view text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::Parse, what + ": invalid JSON at byte " + std::to_string(e.byte));
  }
}

json rat_vec(const Vec& v) {
  json out = json::array();
  for (const auto& x : v) out.push_back(to_string(x));
  return out;
}

json rat_mat(const Mat& m) {
  json out = json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) out.push_back(rat_vec(m.row(r)));
  return out;
}

json certificate_json(const Certificate& cert) {
  json out = json::array();
  for (const auto& c : cert.checks) {
    json e;
    e["name"] = c.name;
    e["pass"] = c.pass;
    e["residual"] = rat_vec(c.residual);
    out.push_back(e);
  }
  return out;
}

Vec normalization_residual(const Normalizer& nz, const Cochain& kappa_tilde) {
  if (!nz.check_bianchi_deg1(kappa_tilde)) return nz.complex().d(2) * kappa_tilde.coeffs;
  Vec k2;
  for (auto i : nz.inputs()) k2.push_back(kappa_tilde.coeffs[i]);
  Vec a = nz.solution_operator() * k2;
  return nz.system() * a + nz.rhs_map() * k2;
}

// ---------------------------------------------------------------------------

Outcome cmd_check(const std::filesystem::path& algebra) {
  Outcome out{skeleton("check"), 0};
  try {
    auto loaded = load_algebra(algebra);
    out.report["inputs"]["digest"] = hex64(fnv1a64(loaded.bytes));
    auto alg = CarnotAlgebra::build(loaded.spec);
    auto ext = ExtendedAlgebra::extend(alg);
    Complex cx(ext);
    json r;
    r["dim"] = alg.dim();
    r["layer_dims"] = loaded.spec.layer_dims;
    json labels = json::array();
    for (std::size_t i = 0; i < alg.dim(); ++i) labels.push_back(alg.label(i));
    r["labels"] = labels;
    r["gram"] = rat_mat(alg.gram().gram());
    r["dim_g0"] = ext.dim_g0();
    json g0 = json::array();
    for (const auto& m : ext.g0_basis()) g0.push_back(rat_mat(m));
    r["g0_basis"] = g0;
    r["tanaka_rigidity"] = tanaka_rigidity(cx);
    out.report["results"] = r;
  } catch (const Error& e) {
    out.report["error"] = error_json(e);
    out.exit_code = exit_code_for(e);
  }
  return out;
}

Outcome cmd_complex(const std::filesystem::path& algebra, std::size_t k) {
  Outcome out{skeleton("complex"), 0};
  try {
    auto loaded = load_algebra(algebra);
    out.report["inputs"]["digest"] = hex64(fnv1a64(loaded.bytes));
    out.report["inputs"]["k"] = k;
    Complex cx(ExtendedAlgebra::extend(CarnotAlgebra::build(loaded.spec)));
    if (k > cx.max_k()) throw Error(ErrorKind::InvalidInput, "k exceeds dim g_- = " + std::to_string(cx.max_k()));
    json r;
    r["k"] = k;
    r["dim"] = cx.dim(k);
    json slices = json::array();
    for (const auto& s : slice_dimensions(cx, k)) {
      json e;
      e["homogeneity"] = s.homogeneity;
      e["dim"] = s.total;
      e["tilde_t"] = s.t;
      e["d_tilde_t"] = s.d_t;
      e["p"] = s.p;
      e["e0"] = s.e0;
      slices.push_back(e);
    }
    r["slices"] = slices;
    json ids = json::array();
    bool all = true;
    for (const auto& c : check_identities(cx, k)) {
      json e;
      e["name"] = c.name;
      e["holds"] = c.holds;
      all = all && c.holds;
      ids.push_back(e);
    }
    r["identities"] = ids;
    out.report["results"] = r;
    if (!all) out.exit_code = 1;
  } catch (const Error& e) {
    out.report["error"] = error_json(e);
    out.exit_code = exit_code_for(e);
  }
  return out;
}

Outcome cmd_normalize(const std::filesystem::path& algebra, const std::filesystem::path& kappa) {
  Outcome out{skeleton("normalize"), 0};
  try {
    auto loaded = load_algebra(algebra);
    std::string kbytes = read_file(kappa);
    out.report["inputs"]["digest"] = hex64(fnv1a64(kbytes, fnv1a64(loaded.bytes)));
    Complex cx(ExtendedAlgebra::extend(CarnotAlgebra::build(loaded.spec)));
    Cochain kt = kappa_from_json(parse_json(kbytes, kappa.filename().string()), cx);
    Normalizer nz(cx);
    try {
      auto sol = nz.solve_alpha1(kt);
      json r;
      r["alpha_1"] = cochain_json(cx, sol.alpha_1);
      r["kappa_1"] = cochain_json(cx, sol.kappa_1);
      r["system_rank"] = sol.system_rank;
      r["unknowns"] = sol.unknowns;
      out.report["results"] = r;
      out.report["certificates"] = certificate_json(certify(cx, sol.kappa_1));
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Inconsistent) throw;
      out.report["error"] = error_json(e);
      out.report["error"]["residual"] = rat_vec(normalization_residual(nz, kt));
      out.exit_code = 2;
    }
  } catch (const Error& e) {
    out.report["error"] = error_json(e);
    out.exit_code = exit_code_for(e);
  }
  return out;
}

Outcome cmd_frame(const std::filesystem::path& frame) {
  Outcome out{skeleton("frame"), 0};
  try {
    std::string bytes = read_file(frame);
    std::uint64_t h = fnv1a64(bytes);
    FrameFile ff = frame_from_json(parse_json(bytes, frame.filename().string()), frame.parent_path());
    if (!ff.symbol_path.empty()) h = fnv1a64(read_file(frame.parent_path() / ff.symbol_path), h);
    out.report["inputs"]["digest"] = hex64(h);
    out.report["inputs"]["degree"] = ff.degree;

    Complex cx(ExtendedAlgebra::extend(CarnotAlgebra::build(ff.symbol)));
    const auto& alg = cx.algebra();
    const auto& minus = alg.minus();
    const std::size_t n = minus.dim();
    const bool two_three = minus.step() == 2 && minus.layer_dim(1) == 2 && minus.layer_dim(2) == 1;
    const bool contact = minus.step() == 2 && minus.layer_dim(1) >= 4 && minus.layer_dim(2) == 1;

    json r;
    r["growth"] = growth_vector(ff.model);
    std::optional<ConnectionReport> rep;
    try {
      rep = solve_canonical(cx, ff.model, ff.degree);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Inconsistent) throw;
      out.report["error"] = error_json(e);
      std::vector<std::vector<Poly>> zero(ff.model.fields.size(), std::vector<Poly>(alg.dim_g0(), Poly(ff.model.dim)));
      auto ref = analyze_connection(cx, ff.model, zero, ff.degree);
      out.report["error"]["residual"] = rat_vec(normalization_residual(Normalizer(cx), ref.kappa_tilde_1));
      out.exit_code = 2;
    }
    if (rep) {
      r["degree"] = rep->degree;
      json om = json::object(), mu = json::object();
      for (std::size_t a = 0; a < n; ++a) {
        r["grading_frame"][minus.label(a)] = rat_vec(rep->point.frame.col(a));
        om[minus.label(a)] = rat_vec(rep->point.omega.row(a));
      }
      for (std::size_t a = 0; a < rep->mu.size(); ++a) {
        Vec v;
        for (const auto& j : rep->mu[a]) v.push_back(j.value());
        mu[minus.label(a)] = rat_vec(v);
      }
      r["mu"] = mu;
      r["omega"] = om;
      r["torsion"] = pairs_json(alg, rep->point.torsion);
      r["curvature"] = pairs_json(alg, rep->point.curvature);
      r["alpha_1"] = cochain_json(cx, rep->alpha_1);
      r["kappa"] = cochain_json(cx, rep->point.kappa);
      json certs;
      certs["cartan"] = certificate_json(rep->cartan);
      certs["manifold"] = certificate_json(rep->manifold);
      certs["consistency"] = certificate_json(rep->consistency);
      if (contact) certs["contact"] = certificate_json(contact_conditions(cx, rep->point));
      if (two_three) certs["reeb"] = certificate_json(reeb_check(cx, ff.model, rep->mu));
      out.report["certificates"] = certs;
    }
    if (!ff.oracle.empty()) {
      json o;
      o["model"] = ff.oracle;
      try {
        auto orc = closed_form_oracle(cx, ff.oracle, ff.model, ff.degree);
        json st = json::object();
        for (const auto& nv : orc.structure) st[nv.name] = to_string(nv.value);
        o["structure"] = st;
        o["checks"] = certificate_json(orc.checks);
        if (rep) o["agreement"] = certificate_json(compare_connections(rep->point, orc.connection.point));
      } catch (const Error& e) {
        o["error"] = error_json(e);
      }
      r["oracle"] = o;
    }
    out.report["results"] = r;
  } catch (const Error& e) {
    out.report["error"] = error_json(e);
    out.exit_code = exit_code_for(e);
  }
  return out;
}

std::string serialize(const json& report) { return report.dump(2) + "\n"; }

}  // namespace canonconn::io
