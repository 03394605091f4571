"""Regenerates the reference values in stats_reference.json.

Every expected value here comes from scipy/statsmodels or from a direct
O(n^2) evaluation that shares no code with the Rust implementation.
"""
import json

import numpy as np
from scipy import stats
from statsmodels.stats.diagnostic import lilliefors

rng = np.random.default_rng(20240611)
out = {}

# --- Welch t ---
out["welch"] = []
for a, b in [
    ([1, 2, 3, 4], [2, 3, 4, 5]),
    ([1.5, 2.25, 9.0, 4.0, 3.3], [0.2, 0.1, 0.4]),
    (list(rng.normal(0, 1, 30)), list(rng.normal(0.5, 3, 12))),
]:
    r = stats.ttest_ind(a, b, equal_var=False)
    va, vb = np.var(a, ddof=1) / len(a), np.var(b, ddof=1) / len(b)
    df = (va + vb) ** 2 / (va**2 / (len(a) - 1) + vb**2 / (len(b) - 1))
    s = stats.ttest_ind(a, b, equal_var=True)
    out["welch"].append(dict(a=[float(x) for x in a], b=[float(x) for x in b],
                             t=float(r.statistic), p=float(r.pvalue), df=float(df),
                             student_t=float(s.statistic), student_p=float(s.pvalue)))

# --- distribution functions ---
xs = [-8.5, -5.0, -2.5, -1.96, -0.3, 0.0, 0.7, 1.6448536269514722, 3.1, 6.0]
out["pnorm"] = [[x, float(stats.norm.cdf(x))] for x in xs]
ps = [1e-12, 1e-6, 0.001, 0.025, 0.3, 0.5, 0.75, 0.975, 0.999999]
out["qnorm"] = [[p, float(stats.norm.ppf(p))] for p in ps]
out["pt"] = [[t, df, float(stats.t.cdf(t, df))]
             for t, df in [(-1.0954, 6.0), (2.5, 3.3), (-4.0, 50.0), (0.1, 1.0), (12.0, 7.5)]]

# --- Shapiro-Wilk on 20 fixed vectors ---
vecs = [list(np.arange(1.0, 21.0))]
vecs.append([1.0, 2.0, 4.0])
vecs.append([2.1, 3.3, 0.4, 5.0, 1.2])
vecs.append(list(rng.normal(0, 1, 8)))
vecs.append(list(rng.normal(10, 2, 11)))
vecs.append(list(rng.normal(0, 1, 12)))
vecs.append(list(rng.exponential(1.0, 15)))
vecs.append(list(rng.uniform(0, 1, 25)))
vecs.append(list(rng.standard_t(2, 40)))
vecs.append(list(rng.normal(0, 1, 50)))
vecs.append(list(rng.lognormal(0, 1, 60)))
vecs.append(list(rng.normal(5, 1, 100)))
vecs.append(list(rng.beta(20, 3, 200)))
vecs.append(list(rng.normal(0, 1, 300)))
vecs.append(list(rng.standard_t(3, 500)))
vecs.append(list(np.round(rng.normal(50, 10, 150))))
vecs.append(list(rng.gamma(2.0, 1.0, 1000)))
vecs.append(list(rng.normal(0, 1, 2000)))
vecs.append(list(rng.uniform(0, 1, 4)))
vecs.append(list(rng.normal(0, 1, 6)))
out["shapiro"] = []
for v in vecs:
    r = stats.shapiro(v)
    out["shapiro"].append(dict(x=[float(t) for t in v], w=float(r.statistic), p=float(r.pvalue)))

# --- DeLong: O(n^2) kernel evaluation, written from the definition ---
def delong(scores, labels):
    pos = [s for s, y in zip(scores, labels) if y == 1]
    neg = [s for s, y in zip(scores, labels) if y == 0]
    def psi(x, y):
        return 1.0 if x > y else (0.5 if x == y else 0.0)
    v10 = [sum(psi(x, y) for y in neg) / len(neg) for x in pos]
    v01 = [sum(psi(x, y) for x in pos) / len(pos) for y in neg]
    auc = sum(v10) / len(pos)
    s10 = np.var(v10, ddof=1)
    s01 = np.var(v01, ddof=1)
    return auc, float(np.sqrt(s10 / len(pos) + s01 / len(neg)))

out["delong"] = []
for i in range(20):
    n = int(rng.integers(8, 60))
    labels = [int(t) for t in rng.integers(0, 2, n)]
    labels[0], labels[1], labels[2], labels[3] = 1, 1, 0, 0
    raw = rng.normal(0, 1, n) + 0.8 * np.array(labels)
    if i % 3 == 0:
        raw = np.round(raw, 1)  # ties
    scores = [float(s) for s in raw]
    auc, se = delong(scores, labels)
    out["delong"].append(dict(scores=scores, labels=labels, auc=auc, se=se))

# --- Wilcoxon normal approximation with ties (scipy, correction=True) ---
out["wilcoxon_approx"] = []
for i in range(5):
    a = np.round(rng.normal(0.80, 0.05, 30), 2)
    b = np.round(rng.normal(0.78 + 0.01 * i, 0.05, 30), 2)
    r = stats.wilcoxon(a, b, zero_method="wilcox", correction=True, method="approx")
    d = a - b
    d = d[np.abs(d) > 1e-12]
    ranks = stats.rankdata(np.abs(d))
    out["wilcoxon_approx"].append(dict(a=[float(t) for t in a], b=[float(t) for t in b],
                                       p=float(r.pvalue), w_plus=float(ranks[d > 0].sum()),
                                       n_effective=int(len(d))))

# --- Lilliefors KS ---
out["lilliefors"] = []
for v in [rng.normal(0, 1, 40), rng.uniform(0, 1, 100), rng.exponential(1, 300), rng.normal(3, 2, 1000)]:
    d, p = lilliefors(v, dist="norm", pvalmethod="approx")
    out["lilliefors"].append(dict(x=[float(t) for t in v], d=float(d), p=float(p)))

with open("stats_reference.json", "w") as f:
    json.dump(out, f, indent=1)
print("ok")
