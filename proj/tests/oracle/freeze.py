"""Independent reference values for the unit tests.

Run with numpy and scipy available; the printed numbers are pasted into the
C++ tests as literals. Nothing here imports the library under test.
"""
import math

import numpy as np
from scipy import stats

np.set_printoptions(precision=17)


def show(label, value):
    print(f"{label}: {value!r}")


# log-return of 100 -> 110
show("ln(1.1)", math.log(1.1))

# MP edges at c = 30/252
c = 30 / 252
show("mp lower", (1 - math.sqrt(c)) ** 2)
show("mp upper", (1 + math.sqrt(c)) ** 2)

# step ratio series, full-sample z-score, ell = 1
r = np.array([0, 0, 0, 0, 10, 10, 10, 10], dtype=float)
show("step z", (r - r.mean()) / r.std(ddof=1))
# same series, ell = 3 trailing prefix average
z = (r - r.mean()) / r.std(ddof=1)
show("step chi ell3", np.array([z[max(0, t - 2):t + 1].mean() for t in range(len(z))]))
# causal z-score of [1, 2, 4, 8]
s = np.array([1.0, 2.0, 4.0, 8.0])
causal = [0.0] + [(s[t] - s[:t + 1].mean()) / s[:t + 1].std(ddof=1) for t in range(1, len(s))]
show("causal z", np.array(causal))

# OLS fixture of length 20
x = np.array([math.sin(0.7 * i) + 0.05 * i for i in range(20)])
y = np.array([0.3 + 1.7 * x[i] + 0.4 * math.cos(1.3 * i) for i in range(20)])
X = np.column_stack([np.ones(20), x])
coef, *_ = np.linalg.lstsq(X, y, rcond=None)
res = y - X @ coef
sse = res @ res
se_beta = math.sqrt(sse / 18 / ((x - x.mean()) @ (x - x.mean())))
t = coef[1] / se_beta
show("ols alpha", coef[0])
show("ols beta", coef[1])
show("ols r2", np.corrcoef(x, y)[0, 1] ** 2)
show("ols t", t)
show("ols p", 2 * stats.t.sf(abs(t), 18))
# p-value of a weak relation
y2 = np.array([0.1 * x[i] + math.cos(2.1 * i) for i in range(20)])
sl = stats.linregress(x, y2)
show("weak beta", sl.slope)
show("weak p", sl.pvalue)
show("student p(t=2, dof=10)", 2 * stats.t.sf(2.0, 10))
show("student p(t=0.5, dof=3)", 2 * stats.t.sf(0.5, 3))

# metrics
w = np.full(52, 0.001)
mu = np.prod(1 + w) ** (52 / 52) - 1
show("const mu", mu)
show("const vol (annualized centring)", math.sqrt(52 / 51 * np.sum((w - mu) ** 2)))
alt = np.array([0.01, -0.01] * 26)
mu_alt = np.prod(1 + alt) ** (52 / 52) - 1
vol_alt = math.sqrt(52 / 51 * np.sum((alt - mu_alt) ** 2))
vol_alt_w = math.sqrt(52 / 51 * np.sum((alt - alt.mean()) ** 2))
show("alt mu", mu_alt)
show("alt vol", vol_alt)
show("alt vol weekly centring", vol_alt_w)
show("alt sharpe", mu_alt / vol_alt)
down = math.sqrt(52 / 51 * np.sum(np.minimum(alt, 0) ** 2))
show("alt sortino", mu_alt / down)
short = np.array([0.02, -0.01, 0.03, -0.02, 0.01])
mu_s = np.prod(1 + short) ** (52 / 5) - 1
show("short mu", mu_s)
show("short vol", math.sqrt(52 / 4 * np.sum((short - mu_s) ** 2)))
show("short sortino", mu_s / math.sqrt(52 / 4 * np.sum(np.minimum(short, 0) ** 2)))
mkt = np.array([0.01, -0.005, 0.02, -0.01, 0.0])
beta = np.cov(short, mkt, ddof=1)[0, 1] / np.var(mkt, ddof=1)
show("short beta", beta)
show("short treynor", mu_s / beta)

# EW backtest on a 30-row, 2-asset fixture: T = 10, step = 5
rows = 30
lr = np.array([[0.01 * math.sin(0.9 * t + 0.3), 0.015 * math.cos(0.5 * t) - 0.002] for t in range(rows)])
ew = []
for start in range(10, rows - 5 + 1, 5):
    block = np.expm1(lr[start:start + 5].sum(axis=0))
    ew.append(block.mean())
show("ew fixture returns", np.array(ew))
show("ew fixture cumulative", np.cumprod(1 + np.array(ew)) - 1)
