"""Acceptance criteria 1-9.  Each test records one PASS/FAIL line, listed again in the terminal summary."""

import random
import time
from fractions import Fraction

from conftest import rand_matrix, rand_rational_matrix, record
from quivinv.generators import (
    BpfDescriptor,
    SigmaDescriptor,
    matrix_invariant_generators,
    matrix_setting,
    quiver_invariant_generators,
    setting_generators,
    supermixed_generators,
    general_generators,
)
from quivinv.identities import check_family
from quivinv.invariants import invariance_suite, jacobian_rank, separate
from quivinv.linalg import char_poly_coeffs, generalized_pfaffian
from quivinv.matrix import Matrix
from quivinv.quiver import (
    Arrow,
    MixedQuiverSetting,
    Quiver,
    Representation,
    act,
    plain_setting,
    sample_group_element,
    sample_representation,
)
from quivinv.tableaux import (
    bpf,
    determinant_tableau,
    dp,
    evaluate_bplp,
    pfaffian_tableau,
    sigma_k_tableau,
    tableau_from_bplp,
)
from quivinv.trace import TracePolynomial, TraceSymbol, amitsur_expand, evaluate, power_reduce, sigma_tr_symbolic


def s(level, *word):
    return TracePolynomial.symbol(TraceSymbol(level, word))


def test_criterion_1_formula_reproduction():
    start = time.perf_counter()
    checks = [
        amitsur_expand(2, [(1, ("A1",)), (1, ("A2",))])
        == s(2, "A1") + s(2, "A2") + s(1, "A1") * s(1, "A2") - s(1, "A1", "A2"),
        power_reduce(1, 2) == s(1, "A") ** 2 - 2 * s(2, "A"),
        sigma_tr_symbolic(0, 1) == -s(1, "Y", "Z") + s(1, "Y", "Z^T"),
        sigma_tr_symbolic(1, 1) == (-s(1, "X") * s(1, "Y", "Z") + s(1, "X") * s(1, "Y", "Z^T")
                                    + s(1, "X", "Y", "Z") - s(1, "X", "Y", "Z^T")
                                    - s(1, "X", "Y^T", "Z") + s(1, "X", "Y^T", "Z^T")),
    ]
    checks += [sigma_tr_symbolic(t, 0) == s(t, "X") for t in range(1, 6)]
    elapsed = time.perf_counter() - start
    ok = all(checks) and elapsed < 1
    assert record(1, "formula reproduction", ok, f"{sum(checks)}/{len(checks)} identities, {elapsed:.2f}s")


def test_criterion_2_bpf_canonical_cases():
    rng = random.Random("criterion-2")
    start = time.perf_counter()
    bad = 0
    for k in range(200):
        n = (2, 4, 6)[k % 3]
        x = rand_rational_matrix(rng, n)
        kk = rng.randint(1, n)
        bad += bpf(pfaffian_tableau(n), [x]) != generalized_pfaffian(x)
        bad += bpf(determinant_tableau(n), [x]) != x.det()
        bad += bpf(sigma_k_tableau(n, kk), [x, Matrix.identity(n)]) != char_poly_coeffs(x)[kk - 1]
    elapsed = time.perf_counter() - start
    assert record(2, "bpf canonical cases", bad == 0 and elapsed < 30, f"{bad} mismatches, {elapsed:.1f}s")


def _random_bplp(rng):
    while True:
        m = rng.randint(1, 3)
        blocks = [(rng.randint(1, m), rng.randint(1, m)) for _ in range(rng.randint(1, 4))]
        r = [rng.randint(1, 2) for _ in blocks]
        dims = [0] * m
        for (p, q), k in zip(blocks, r):
            dims[p - 1] += k
            dims[q - 1] += k
        if all(dims) and sum(dims) <= 8:
            return r, blocks, dims


def test_criterion_3_bplp_round_trip():
    rng = random.Random("criterion-3")
    start = time.perf_counter()
    bad = 0
    for _ in range(100):
        r, blocks, dims = _random_bplp(rng)
        mats = [rand_matrix(rng, dims[p - 1], dims[q - 1]) for p, q in blocks]
        tws, sign = tableau_from_bplp(r, [(p, q, x) for (p, q), x in zip(blocks, mats)], dims)
        bad += tws.bpf() != sign * evaluate_bplp(r, blocks, dims, mats)
    elapsed = time.perf_counter() - start
    assert record(3, "b.p.l.p. round trip", bad == 0 and elapsed < 60, f"{bad}/100 mismatches, {elapsed:.1f}s")


def test_criterion_4_dp_properties():
    rng = random.Random("criterion-4")
    start = time.perf_counter()
    bad = {"det": 0, "pfpf": 0, "c'": 0, "c''": 0}
    for _ in range(100):
        n = rng.randint(1, 6)
        x, y, z = (rand_matrix(rng, n) for _ in range(3))
        bad["det"] += dp(0, 0, x, y, z) != x.det()
        r, s_ = rng.randint(1, 3), rng.randint(1, 3)
        x0 = rand_matrix(rng, 2 * r, 2 * s_)
        y0, z0 = rand_matrix(rng, 2 * r), rand_matrix(rng, 2 * s_)
        bad["pfpf"] += dp(r, s_, x0, y0, z0) != generalized_pfaffian(y0) * generalized_pfaffian(z0)
        while True:
            t, r, s_ = rng.randint(0, 6), rng.randint(0, 3), rng.randint(0, 3)
            if t + 2 * r <= 6 and t + 2 * s_ <= 6 and t + 2 * r > 0 and t + 2 * s_ > 0:
                break
        x = rand_matrix(rng, t + 2 * r, t + 2 * s_)
        y, z = rand_matrix(rng, t + 2 * r), rand_matrix(rng, t + 2 * s_)
        base = dp(r, s_, x, y, z)
        g, h = rand_matrix(rng, t + 2 * r, bound=2), rand_matrix(rng, t + 2 * s_, bound=2)
        bad["c'"] += dp(r, s_, g * x, g * y * g.T, z) != g.det() * base
        bad["c''"] += dp(r, s_, x * h, y, h.T * z * h) != h.det() * base
    elapsed = time.perf_counter() - start
    ok = not any(bad.values()) and elapsed < 60
    assert record(4, "DP properties", ok, f"failures {bad}, {elapsed:.1f}s")


def test_criterion_5_sigma_tr_cross_oracle():
    rng = random.Random("criterion-5")
    start = time.perf_counter()
    bad = 0
    cases = [(t, r) for r in range(0, 3) for t in range(0, 6) if 0 < t + 2 * r <= 5]
    for t, r in cases:
        poly = sigma_tr_symbolic(t, r)
        n = t + 2 * r
        for _ in range(50):
            x, y, z = (rand_matrix(rng, n, bound=2) for _ in range(3))
            bad += evaluate(poly, {"X": x, "Y": y, "Z": z}) != dp(r, r, x, y, z)
    # lambda expansion: DP_{r,r}(X + lam E, Y, Z) = sum_t lam^(t0 - t) sigma_{t,r}(X, Y, Z)
    lam_bad = 0
    for n in range(1, 6):
        for r in range(0, n // 2 + 1):
            t0 = n - 2 * r
            x, y, z = (rand_matrix(rng, n) for _ in range(3))
            parts = [evaluate(sigma_tr_symbolic(t, r), {"X": x, "Y": y, "Z": z}) if t + r else Fraction(1)
                     for t in range(0, t0 + 1)]
            for lam in (-2, -1, 1, 3, Fraction(1, 2)):
                lhs = dp(r, r, x + Matrix.identity(n).scale(lam), y, z)
                rhs = sum(Fraction(lam) ** (t0 - t) * parts[t] for t in range(0, t0 + 1))
                lam_bad += lhs != rhs
    elapsed = time.perf_counter() - start
    ok = bad == 0 and lam_bad == 0 and elapsed < 120
    assert record(5, "sigma_(t,r) cross-oracle", ok,
                  f"{bad} DP mismatches over {len(cases)} (t,r), {lam_bad} lambda mismatches, {elapsed:.1f}s")


def test_criterion_6_relation_families():
    start = time.perf_counter()
    reports = []
    for n in (2, 3):
        for fam in ("relations-a", "relations-b", "relations-c"):
            reports.append(check_family(fam, n, 100, seed="criterion-6"))
    failed = sum(c["failed"] for rep in reports for c in rep["checks"])
    passed = sum(c["passed"] for rep in reports for c in rep["checks"])
    c_checks = {c["check"] for rep in reports if rep["family"] == "relations-c" for c in rep["checks"]}
    elapsed = time.perf_counter() - start
    ok = failed == 0 and "c) sigma_(1,1), t+2r=n+1" in c_checks and "c) sigma_(0,2), t+2r=n+1" in c_checks \
        and elapsed < 60
    assert record(6, "relation families", ok, f"{passed} zeros, {failed} failures, {elapsed:.1f}s")


def _families():
    zigzag = Quiver(2, [Arrow("a", 1, 2), Arrow("b", 1, 2)])
    cyc = Quiver(2, [Arrow("a", 2, 1), Arrow("b", 1, 2), Arrow("c", 1, 1)])
    mixed = MixedQuiverSetting(Quiver(3, [Arrow("alpha", 1, 3), Arrow("beta", 2, 1, "S+"), Arrow("gamma", 3, 2)]),
                               (2, 2, 3), ("GL", "GL", "O"), (2, 1, 3))
    sp_mixed = MixedQuiverSetting(Quiver(2, [Arrow("a", 1, 2), Arrow("b", 2, 2, "L-")]),
                                  (3, 2), ("GL", "Sp"), (1, 2))
    five = MixedQuiverSetting(
        Quiver(5, [Arrow("alpha", 2, 1), Arrow("beta", 1, 2, "S+"), Arrow("gamma", 1, 3), Arrow("delta", 3, 5)]),
        (2,) * 5, ("GL", "GL", "SL", "SL", "O"), (2, 1, 4, 3, 5))
    so_loops = MixedQuiverSetting(Quiver(1, [Arrow("x", 1, 1), Arrow("y", 1, 1, "S-")]), (2,), ("SO",), (1,))
    sl_pair = MixedQuiverSetting(zigzag, (2, 2), ("SL", "SL"), (1, 2))
    sl_mirror = MixedQuiverSetting(Quiver(2, [Arrow("a", 1, 2), Arrow("b", 1, 1)]), (2, 2), ("SL", "SL"), (2, 1))
    return [
        ("matrix a) GL(3), d=2", matrix_setting("GL", 3, 2), matrix_invariant_generators("GL", 3, 2, 4)),
        ("matrix b) O(3), d=2", matrix_setting("O", 3, 2), matrix_invariant_generators("O", 3, 2, 3)),
        ("matrix c) SO(3), d=1", matrix_setting("SO", 3, 1), matrix_invariant_generators("SO", 3, 1, 4)),
        ("matrix d) SO(2), d=2", matrix_setting("SO", 2, 2), matrix_invariant_generators("SO", 2, 2, 2)),
        ("matrix e) Sp(2), d=2", matrix_setting("Sp", 2, 2), matrix_invariant_generators("Sp", 2, 2, 3)),
        ("quiver GL, 2-vertex cycle", plain_setting(cyc, (2, 3)), quiver_invariant_generators(cyc, (2, 3), 4)),
        ("supermixed GL/O", mixed, supermixed_generators(mixed, 3)),
        ("supermixed GL/Sp", sp_mixed, supermixed_generators(sp_mixed, 3)),
        ("general five-vertex GL/SL/O", five, general_generators(five, 4, 3)),
        ("general SO(2) loops", so_loops, general_generators(so_loops, 2, 1)),
        ("general SL bipartite", sl_pair, general_generators(sl_pair, 1, 3)),
        ("general SL mirror", sl_mirror, general_generators(sl_mirror, 2, 2)),
    ]


def test_criterion_7_invariance_suites():
    start = time.perf_counter()
    lines = []
    failures = 0
    covariance = 0
    for name, setting, descs in _families():
        rep = invariance_suite(descs, setting, 50, seed=f"criterion-7:{name}")
        failures += rep["failures"]
        covariance += sum(d.get("covariance_pass", 0) for d in rep["descriptors"])
        lines.append(f"{name}: {len(descs)} descriptors, {rep['failures']} failures")
    elapsed = time.perf_counter() - start
    for line in lines:
        print("   ", line)
    ok = failures == 0 and covariance > 0 and elapsed < 300
    assert record(7, "invariance suites", ok,
                  f"{len(lines)} families x 50 trials, {failures} failures, {covariance} covariance checks, "
                  f"{elapsed:.1f}s")


def test_criterion_8_gl2_structure():
    setting = matrix_setting("GL", 2, 2)
    five = [SigmaDescriptor(1, ("X1",)), SigmaDescriptor(1, ("X2",)), SigmaDescriptor(1, ("X1", "X2")),
            SigmaDescriptor(2, ("X1",)), SigmaDescriptor(2, ("X2",))]
    rng = random.Random("criterion-8")
    rk = jacobian_rank(five, sample_representation(setting, rng))
    separated = 0
    for _ in range(10):
        while True:
            a = [rng.randint(-5, 5) for _ in range(4)]
            b = [rng.randint(-5, 5) for _ in range(4)]
            if sorted([(a[0], a[1]), (a[2], a[3])]) != sorted([(b[0], b[1]), (b[2], b[3])]):
                break
        r1 = Representation(setting, {"X1": Matrix([[a[0], 0], [0, a[2]]]), "X2": Matrix([[a[1], 0], [0, a[3]]])})
        r2 = Representation(setting, {"X1": Matrix([[b[0], 0], [0, b[2]]]), "X2": Matrix([[b[1], 0], [0, b[3]]])})
        separated += not separate(r1, r2, five).equal
    merged = 0
    for _ in range(10):
        r = sample_representation(setting, rng)
        merged += separate(r, act(sample_group_element(setting, rng), r), five).equal
    ok = rk == 5 and separated == 10 and merged == 10
    assert record(8, "GL(2) d=2 structure", ok,
                  f"Jacobian rank {rk}, {separated}/10 non-conjugate separated, {merged}/10 conjugate equal")


def test_criterion_9_degenerate_checks():
    s = matrix_setting("GL", 2, 1)
    descs = setting_generators(s, 4)
    nil = Representation(s, {"X1": Matrix([[0, 1], [0, 0]])})
    zero = Representation(s, {"X1": Matrix.zeros(2, 2)})
    verdict = separate(nil, zero, descs, {"max_path_len": 4})
    chain = Quiver(3, [Arrow("a", 2, 1), Arrow("b", 3, 2)])
    empty = setting_generators(plain_setting(chain, (2, 2, 2)), 4)
    ok = verdict.equal and bool(verdict.caveats) and empty == []
    assert record(9, "degenerate checks", ok,
                  f"nilpotent vs zero {'equal' if verdict.equal else 'distinguished'}, "
                  f"acyclic list length {len(empty)}")
