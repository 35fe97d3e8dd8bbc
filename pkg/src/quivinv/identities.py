"""Randomized exact checks of the trace and pfaffian identities.

Each family runs ``trials`` trials; trial k draws from ``random.Random(f"{seed}:{k}")``.
"""

from __future__ import annotations

import random

from .fields import QQ
from .linalg import char_poly_coeffs, generalized_pfaffian, sigma
from .matrix import Matrix
from .tableaux import (
    bpf,
    determinant_tableau,
    dp,
    pfaffian_tableau,
    sigma_k_tableau,
    sigma_tr_via_dp,
)
from .trace import (
    amitsur_expand,
    evaluate,
    power_reduce,
    relation_instance,
    sigma_of_sum,
    sigma_tr_symbolic,
)

FAMILIES = ("amitsur", "power", "sigma-tr", "relations-a", "relations-b", "relations-c",
            "dp-equivariance", "pf-square", "bpf-examples")


def random_matrix(rng, nrows, ncols=None, field=QQ, bound=3):
    ncols = nrows if ncols is None else ncols
    return Matrix([[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)], field)


def random_invertible(rng, n, field=QQ, bound=2):
    while True:
        g = random_matrix(rng, n, n, field, bound)
        if g.det():
            return g


def _random_word(rng, letters, max_len):
    return tuple(rng.choice(letters) for _ in range(rng.randint(1, max_len)))


def _combination(rng, letters, max_terms=2, max_len=2):
    out = []
    for _ in range(rng.randint(1, max_terms)):
        c = rng.choice([-2, -1, 1, 2, 3])
        out.append((c, _random_word(rng, letters, max_len)))
    return out


class _Tally:
    def __init__(self):
        self.checks = {}

    def record(self, name, ok, tag):
        st = self.checks.setdefault(name, {"check": name, "passed": 0, "failed": 0, "reproducers": []})
        if ok:
            st["passed"] += 1
        else:
            st["failed"] += 1
            st["reproducers"].append(tag)


def _amitsur(rng, n, field, tally, tag):
    letters = ["A1", "A2"]
    mats = {x: random_matrix(rng, n, n, field) for x in letters}
    summands = _combination(rng, letters, 3, 2)
    t = rng.randint(1, n)
    lhs = evaluate(amitsur_expand(t, summands), mats, field)
    tally.record(f"amitsur t<=n", lhs == sigma_of_sum(t, summands, mats, field), tag)


def _power(rng, n, field, tally, tag):
    a = random_matrix(rng, n, n, field)
    t, l = rng.randint(1, n), rng.randint(1, 3)
    tally.record("power_reduce", evaluate(power_reduce(t, l), {"A": a}, field) == sigma(t, a ** l), tag)


def _sigma_tr(rng, n, field, tally, tag):
    x, y, z = (random_matrix(rng, n, n, field) for _ in range(3))
    assignment = {"X": x, "Y": y, "Z": z}
    for r in range(0, n // 2 + 1):
        t = n - 2 * r
        val = evaluate(sigma_tr_symbolic(t, r), assignment, field)
        tally.record(f"sigma_({t},{r}) = DP_({r},{r})", val == sigma_tr_via_dp(t, r, x, y, z), tag)
    for r in range(0, (n + 1) // 2 + 1):
        t = n + 1 - 2 * r
        if t < 0:
            continue
        val = evaluate(sigma_tr_symbolic(t, r), assignment, field)
        tally.record(f"sigma_({t},{r}) = 0", val == field.zero, tag)


def _relations_a(rng, n, field, tally, tag):
    letters = ["X1", "X2", "X1^T", "X2^T"]
    mats = {"X1": random_matrix(rng, n, n, field), "X2": random_matrix(rng, n, n, field)}
    alpha, beta = _random_word(rng, letters, 3), _random_word(rng, letters, 3)
    t = rng.randint(1, n)
    rel = relation_instance("a", t=t, alpha=alpha, beta=beta)
    tally.record("a) symbolic zero", rel.is_zero(), tag)
    tally.record("a) numeric zero", evaluate(rel, mats, field) == field.zero, tag)


def _relations_b(rng, n, field, tally, tag):
    letters = ["X1", "X2", "X1^T", "X2^T"]
    mats = {"X1": random_matrix(rng, n, n, field), "X2": random_matrix(rng, n, n, field)}
    t = n + rng.randint(1, 2)
    rel = relation_instance("b", t=t, summands=_combination(rng, letters, 3, 2))
    tally.record(f"b) sigma_t, t>n", evaluate(rel, mats, field) == field.zero, tag)


def _relations_c(rng, n, field, tally, tag):
    letters = ["X1", "X2", "X1^T", "X2^T"]
    mats = {"X1": random_matrix(rng, n, n, field), "X2": random_matrix(rng, n, n, field)}
    for r in range(0, (n + 1) // 2 + 1):
        t = n + 1 - 2 * r
        if t < 0:
            continue
        xs, ys, zs = (_combination(rng, letters, 2, 2) for _ in range(3))
        rel = relation_instance("c", t=t, r=r, xs=xs, ys=ys, zs=zs)
        tally.record(f"c) sigma_({t},{r}), t+2r=n+1", evaluate(rel, mats, field) == field.zero, tag)


def _dp_equivariance(rng, n, field, tally, tag):
    r = rng.randint(0, n // 2)
    t = n - 2 * r
    s = rng.randint(0, max(0, (6 - t) // 2))
    x = random_matrix(rng, t + 2 * r, t + 2 * s, field)
    y = random_matrix(rng, t + 2 * r, t + 2 * r, field)
    z = random_matrix(rng, t + 2 * s, t + 2 * s, field)
    base = dp(r, s, x, y, z)
    g = random_invertible(rng, t + 2 * r, field)
    tally.record("c') DP(gX, gYg^T, Z) = det(g) DP", dp(r, s, g * x, g * y * g.T, z) == g.det() * base, tag)
    h = random_invertible(rng, t + 2 * s, field)
    tally.record("c'') DP(Xg, Y, g^TZg) = det(g) DP", dp(r, s, x * h, y, h.T * z * h) == h.det() * base, tag)
    if r == 0 and s == 0:
        tally.record("a) DP_(0,0) = det", base == x.det(), tag)
    if t == 0:
        tally.record("b) t=0: DP = P(Y) P(Z)", base == generalized_pfaffian(y) * generalized_pfaffian(z), tag)


def _pf_square(rng, n, field, tally, tag):
    x = random_matrix(rng, n, n, field)
    p = generalized_pfaffian(x)
    tally.record("P(X)^2 = det(X - X^T)", p * p == (x - x.T).det(), tag)


def _bpf_examples(rng, n, field, tally, tag):
    x = random_matrix(rng, n, n, field)
    if n % 2 == 0:
        tally.record("pfaffian tableau = P", bpf(pfaffian_tableau(n), [x]) == generalized_pfaffian(x), tag)
    tally.record("determinant tableau = det", bpf(determinant_tableau(n), [x]) == x.det(), tag)
    k = rng.randint(1, n)
    e = Matrix.identity(n, field)
    tally.record("(X, E) tableau = sigma_k", bpf(sigma_k_tableau(n, k), [x, e]) == char_poly_coeffs(x)[k - 1], tag)


_RUNNERS = {
    "amitsur": _amitsur,
    "power": _power,
    "sigma-tr": _sigma_tr,
    "relations-a": _relations_a,
    "relations-b": _relations_b,
    "relations-c": _relations_c,
    "dp-equivariance": _dp_equivariance,
    "pf-square": _pf_square,
    "bpf-examples": _bpf_examples,
}


def check_family(family: str, n: int, trials: int, seed, field=QQ):
    if family not in _RUNNERS:
        raise KeyError(f"unknown family {family!r}; expected one of {', '.join(FAMILIES)}")
    if n < 1:
        raise ValueError("matrix size must be positive")
    if family == "pf-square" and n % 2:
        raise ValueError(f"pf-square needs even n, got {n}")
    if family == "dp-equivariance" and n > 6:
        raise ValueError("dp-equivariance is limited to t + 2r <= 6")
    tally = _Tally()
    run = _RUNNERS[family]
    for k in range(trials):
        tag = f"{seed}:{k}"
        run(random.Random(tag), n, field, tally, tag)
    checks = list(tally.checks.values())
    return {
        "family": family,
        "n": n,
        "trials": trials,
        "seed": seed,
        "field": field.name,
        "checks": checks,
        "ok": all(c["failed"] == 0 for c in checks),
    }
