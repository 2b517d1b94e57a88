# Regenerates data/algebras and data/frames. The kappa/ inputs are kept as committed.
import json, os, sympy as sp
D = os.environ.get('CANONCONN_DATA_OUT', os.path.dirname(os.path.abspath(__file__)))
def dump(name, obj):
    sub = 'frames' if 'symbol' in obj else ('kappa' if 'coeffs' in obj else 'algebras')
    with open(os.path.join(D, sub, name), 'w') as f:
        json.dump(obj, f, indent=2)
        f.write('\n')

def alg(step, dims, brackets, labels, gram=None):
    n1 = dims[0]
    g = gram or [["1" if i == j else "0" for j in range(n1)] for i in range(n1)]
    return {"step": step, "layer_dims": dims,
            "brackets": [{"left": f"b_{l}", "right": f"b_{r}", "result": res} for l, r, res in brackets],
            "gram_minus1": g, "labels": labels}

dump('heisenberg23.json', alg(2, [2, 1], [(1, 2, {"b_3": "1"})], ["A1", "A2", "B"]))
dump('rolling235.json', alg(3, [2, 1, 2], [(1, 2, {"b_3": "1"}), (1, 3, {"b_4": "1"}), (2, 3, {"b_5": "1"})],
                            ["A1", "A2", "B", "C1", "C2"]))
def free(n1):
    br, labels, k = [], [f"A{i+1}" for i in range(n1)], n1
    for i in range(n1):
        for j in range(i + 1, n1):
            k += 1
            br.append((i + 1, j + 1, {f"b_{k}": "1"}))
            labels.append(f"B{i+1}{j+1}")
    return alg(2, [n1, n1 * (n1 - 1) // 2], br, labels)
dump('free2_n3.json', free(3))
dump('free2_n4.json', free(4))
dump('contact_std.json', alg(2, [4, 1], [(1, 2, {"b_5": "1"}), (3, 4, {"b_5": "1"})], ["A1", "A2", "A3", "A4", "B"]))
dump('contact_two_eigen.json', alg(2, [4, 1], [(1, 2, {"b_5": "1"}), (3, 4, {"b_5": "1/2"})], ["A1", "A2", "A3", "A4", "B"]))
bad = alg(2, [2, 1], [(1, 2, {"b_3": "1"}), (2, 1, {"b_3": "1"})], ["A1", "A2", "B"])
dump('malformed_brackets.json', bad)

def pstr(expr, xs):
    expr = sp.expand(expr)
    if expr == 0:
        return "0"
    P = sp.Poly(expr, *xs)
    terms = sorted(P.terms(), key=lambda t: (-sum(t[0]), [-e for e in t[0]]))
    out = []
    for mon, c in terms:
        c = sp.Rational(c)
        factors = [f"x{i+1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(mon) if e]
        mag = abs(c)
        s = ("" if mag == 1 and factors else str(mag) + ("*" if factors else "")) + "*".join(factors)
        out.append(("- " if c < 0 else "+ ") + s)
    r = " ".join(out)
    return r[2:] if r.startswith("+ ") else "-" + r[2:]

def frame(name, symbol, fields, point, oracle=None):
    n = len(point)
    xs = sp.symbols(f'x1:{n+1}')
    doc = {"dim": n, "fields": [[pstr(sp.sympify(c.replace('^', '**'), locals={f"x{i+1}": xs[i] for i in range(n)}) if isinstance(c, str) else c, xs) for c in f] for f in fields],
           "point": point, "symbol": "../algebras/" + symbol}
    if oracle:
        doc["oracle"] = oracle
    dump(name, doc)

frame('heis_model.json', 'heisenberg23.json', [["1", "0", "-1/2*x2"], ["0", "1", "1/2*x1"]], ["1/3", "-2", "5"], "heis23")
frame('heis_perturbed.json', 'heisenberg23.json', [["1", "0", "0"], ["0", "1", "x1+x1*x2"]], ["0", "0", "0"], "heis23")
frame('heis_perturbed2.json', 'heisenberg23.json', [["1", "0", "x2^2"], ["x3", "1", "x1+x1*x2^2"]], ["1/2", "1/3", "1"], "heis23")
frame('underfull_frame.json', 'heisenberg23.json', [["1", "0", "0"], ["0", "1", "0"]], ["0", "0", "0"])
rp = ["1/2", "1/3", "-1", "0", "0"]
frame('rolling_nilpotent.json', 'rolling235.json', [["1", "0", "0", "0", "0"], ["0", "1", "x1", "1/2*x1^2", "x1*x2"]], rp, "rolling235")
frame('rolling_model.json', 'rolling235.json', [["1", "0", "0", "x2*x3", "0"], ["0", "1", "x1", "x1^2", "x1*x2+x3^2"]], rp, "rolling235")
f3n = [["1", "0", "0", "-1/2*x2", "-1/2*x3", "0"], ["0", "1", "0", "1/2*x1", "0", "-1/2*x3"], ["0", "0", "1", "0", "1/2*x1", "1/2*x2"]]
f3p = [["1", "0", "0", "-1/2*x2", "-1/2*x3+x2^2", "0"], ["0", "1", "0", "1/2*x1", "0", "-1/2*x3+x1*x3"], ["0", "0", "1", "x1*x2", "1/2*x1", "1/2*x2"]]
frame('free2_n3_nilpotent.json', 'free2_n3.json', f3n, ["1", "2", "3", "0", "0", "0"], "free_step2")
frame('free2_n3_model.json', 'free2_n3.json', f3p, ["1/2", "1/3", "-1", "0", "0", "0"], "free_step2")
frame('free2_n3_model_origin.json', 'free2_n3.json', f3p, ["0"] * 6, "free_step2")
def free4(pert):
    pq = [(p, q) for p in range(4) for q in range(p + 1, 4)]
    fs = []
    for i in range(4):
        v = ["0"] * 10
        v[i] = "1"
        for k, (p, q) in enumerate(pq):
            if i == q: v[4 + k] = f"1/2*x{p+1}"
            if i == p: v[4 + k] = f"-1/2*x{q+1}"
        if pert:
            if i == 0: v[5] += "+x2^2"
            if i == 1: v[9] += "+x1*x3"
            if i == 3: v[4] += "+x1*x2"
        fs.append(v)
    return fs
p4 = ["1/2", "1/3", "-1", "2"] + ["0"] * 6
frame('free2_n4_nilpotent.json', 'free2_n4.json', free4(False), p4, "free_step2")
frame('free2_n4_model.json', 'free2_n4.json', free4(True), p4, "free_step2")
def contact(lam):
    xs = sp.symbols('x1:6')
    x1, x2, x3, x4, x5 = xs
    a = 1 + x1 * x3 + x2
    g = x1**2 * x4 + x2 * x3
    lin = [-x2 / 2, x1 / 2, -lam * x4 / 2, lam * x3 / 2]
    fs = []
    for i in range(4):
        v = [sp.Integer(0)] * 5
        v[i] = a
        v[4] = a * (lin[i] + sp.diff(g, xs[i]))
        fs.append(v)
    return fs
frame('contact_std_model.json', 'contact_std.json', contact(sp.Integer(1)), ["1/2", "1/3", "-1", "2", "1"], "contact_std")
frame('contact_two_eigen_model.json', 'contact_two_eigen.json', contact(sp.Rational(1, 2)), ["1/2", "1/3", "-1", "2", "1"])
