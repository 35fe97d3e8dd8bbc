"""Characteristic polynomial coefficients, pfaffians and their partial linearizations."""

from __future__ import annotations

import itertools
from math import factorial, prod

from .matrix import Matrix, ShapeError


def char_poly_coeffs(a: Matrix) -> list:
    """Return ``[sigma_1(A), ..., sigma_n(A)]``.

    Sign convention: det(lambda*E - A) = lambda^n - sigma_1 lambda^(n-1) + ... + (-1)^n sigma_n.
    Uses Berkowitz's algorithm, which never divides, so it is valid over any
    commutative scalar backend (prime fields, dual numbers).
    """
    if not a.is_square:
        raise ShapeError(f"char_poly_coeffs needs a square matrix, got {a.shape}")
    n = a.nrows
    if n == 0:
        return []
    zero, one = a.field.zero, a.field.one
    rows = a.rows
    # coefficients of det(lambda E - A_r), highest degree first, for the leading r x r block
    vect = [one, -rows[0][0]]
    for r in range(1, n):
        col_c = [rows[i][r] for i in range(r)]
        row_r = rows[r][:r]
        toeplitz = [one, -rows[r][r]]
        v = col_c
        for k in range(r):
            s = zero
            for x, y in zip(row_r, v):
                s = s + x * y
            toeplitz.append(-s)
            if k + 1 < r:
                v = [_dot(rows[i][:r], v, zero) for i in range(r)]
        new = []
        for i in range(r + 2):
            s = zero
            for j in range(max(0, i - r - 1), min(i, r) + 1):
                s = s + toeplitz[i - j] * vect[j]
            new.append(s)
        vect = new
    return [vect[t] if t % 2 == 0 else -vect[t] for t in range(1, n + 1)]


def _dot(u, v, zero):
    s = zero
    for x, y in zip(u, v):
        s = s + x * y
    return s


def sigma(t: int, a: Matrix):
    """sigma_t(A) with sigma_0 = 1 and sigma_t = 0 for t > n."""
    if t == 0:
        return a.field.one
    coeffs = char_poly_coeffs(a)
    return coeffs[t - 1] if t <= len(coeffs) else a.field.zero


def det(a: Matrix):
    return a.det()


def pfaffian_skew(s: Matrix):
    """Pfaffian of a skew-symmetric matrix by first-row expansion over index subsets.

    pf([[0, 1], [-1, 0]]) == 1. Division free.
    """
    if not s.is_square:
        raise ShapeError("pfaffian of a non-square matrix")
    n = s.nrows
    if n % 2:
        raise ShapeError(f"pfaffian needs even dimension, got {n}")
    zero, one = s.field.zero, s.field.one
    rows = s.rows
    memo = {0: one}

    def rec(mask):
        hit = memo.get(mask)
        if hit is not None:
            return hit
        i = (mask & -mask).bit_length() - 1
        rest = mask & ~(1 << i)
        total = zero
        positive = True
        m = rest
        while m:
            j = (m & -m).bit_length() - 1
            m &= m - 1
            x = rows[i][j]
            if x:
                term = x * rec(rest & ~(1 << j))
                total = total + term if positive else total - term
            positive = not positive
        memo[mask] = total
        return total

    return rec((1 << n) - 1)


def generalized_pfaffian(x: Matrix):
    """P(X) = pf(X - X^T) for an even-dimensional square matrix."""
    if not x.is_square:
        raise ShapeError(f"generalized pfaffian needs a square matrix, got {x.shape}")
    if x.nrows % 2:
        raise ShapeError(f"generalized pfaffian needs even dimension, got {x.nrows}")
    return pfaffian_skew(x - x.T)


def _lagrange_coefficient(nodes, k, field):
    """Row ``k`` of the inverse Vandermonde: weights w_m with coeff_k(f) = sum_m w_m f(nodes[m])."""
    out = []
    for m, xm in enumerate(nodes):
        # expand prod_{j != m} (x - x_j) / (x_m - x_j)
        poly = [field.one]
        denom = field.one
        for j, xj in enumerate(nodes):
            if j == m:
                continue
            poly = [field.zero] + poly
            for i in range(len(poly) - 1):
                poly[i] = poly[i] - xj * poly[i + 1]
            denom = denom * (xm - xj)
        out.append(poly[k] / denom if k < len(poly) else field.zero)
    return out


def extract_coefficient(fn, exponents, degree_bounds, field):
    """Coefficient of x_1^r_1 ... x_s^r_s in a homogeneous polynomial ``fn``.

    ``fn`` maps a list of s scalars to a scalar and is homogeneous of degree
    sum(r).  One variable is fixed to 1 and the rest are recovered by
    tensor-product Lagrange interpolation on the nodes 0..bound.
    """
    s = len(exponents)
    total = sum(exponents)
    if s == 1:
        return fn([field.one])
    bounds = [min(b, total) for b in degree_bounds]
    for r, b in zip(exponents, bounds):
        if r > b:
            return field.zero
    # dehomogenize in the variable with the largest degree bound
    fixed = max(range(s), key=lambda i: bounds[i])
    free = [i for i in range(s) if i != fixed]
    need = max(bounds[i] for i in free) + 1
    p = field.characteristic
    if p and p < need:
        raise ValueError(f"Z/{p} has fewer than the {need} distinct interpolation nodes required")
    grids = []
    for i in free:
        nodes = [field(v) for v in range(bounds[i] + 1)]
        weights = _lagrange_coefficient(nodes, exponents[i], field)
        grids.append([(nd, w) for nd, w in zip(nodes, weights) if w])
    result = field.zero
    for combo in itertools.product(*grids):
        point = [field.one] * s
        weight = field.one
        for i, (nd, w) in zip(free, combo):
            point[i] = nd
            weight = weight * w
        result = result + weight * fn(point)
    return result


def _check_linearization_args(r, xs):
    if len(r) != len(xs) or not xs:
        raise ShapeError("need one positive count per matrix")
    if any(k < 1 for k in r):
        raise ValueError("partial linearization counts must be positive")
    n = xs[0].nrows
    for x in xs:
        if not x.is_square or x.nrows != n:
            raise ShapeError("all matrices must be square of the same size")
        if x.field != xs[0].field:
            raise ShapeError("matrices over different backends")
    return n


def partial_linearization_pf(r, xs, method="interpolate"):
    """Coefficient of x_1^r_1 ... x_s^r_s in P(x_1 X_1 + ... + x_s X_s)."""
    xs = list(xs)
    r = list(r)
    n = _check_linearization_args(r, xs)
    if n % 2:
        raise ShapeError(f"pfaffian linearization needs even dimension, got {n}")
    if sum(r) != n // 2:
        raise ValueError(f"sum of counts {sum(r)} != n/2 = {n // 2}")
    if method == "bruteforce":
        return partial_linearization_pf_bruteforce(r, xs)
    field = xs[0].field

    def fn(c):
        acc = xs[0].scale(c[0])
        for ci, x in zip(c[1:], xs[1:]):
            acc = acc + x.scale(ci)
        return generalized_pfaffian(acc)

    return extract_coefficient(fn, r, _pf_bounds(xs, n // 2), field)


def _pf_bounds(xs, total):
    # degree of x_i is at most half the number of indices touched by X_i - X_i^T
    out = []
    for x in xs:
        touched = set()
        for i in range(x.nrows):
            for j in range(x.ncols):
                if x.rows[i][j] != x.rows[j][i]:
                    touched.add(i)
                    touched.add(j)
        out.append(min(total, len(touched) // 2))
    return out


def partial_linearization_pf_bruteforce(r, xs):
    """Direct summation over S_n of the explicit linearization formula (rational backend)."""
    n = xs[0].nrows
    field = xs[0].field
    slot_of_pair = [j for j, k in enumerate(r) for _ in range(k)]
    total = field.zero
    for perm in itertools.permutations(range(n)):
        term = field.one
        for i, j in enumerate(slot_of_pair):
            term = term * xs[j].rows[perm[2 * i]][perm[2 * i + 1]]
            if not term:
                break
        if term:
            total = total + (term if permutation_sign(perm) > 0 else -term)
    c = prod(factorial(k) for k in r)
    return total / field(c)


def partial_linearization_det(r, xs):
    """Coefficient of x_1^r_1 ... x_s^r_s in det(x_1 X_1 + ... + x_s X_s)."""
    xs = list(xs)
    r = list(r)
    n = _check_linearization_args(r, xs)
    if sum(r) != n:
        raise ValueError(f"sum of counts {sum(r)} != n = {n}")
    field = xs[0].field

    def fn(c):
        acc = xs[0].scale(c[0])
        for ci, x in zip(c[1:], xs[1:]):
            acc = acc + x.scale(ci)
        return acc.det()

    return extract_coefficient(fn, r, [n] * len(r), field)


def block_embed(x: Matrix, p: int, q: int, dims) -> Matrix:
    """The matrix X^{p,q}: X placed in block (p, q) (1-based) of a sum(dims)-square zero matrix."""
    dims = list(dims)
    m = len(dims)
    if not (1 <= p <= m and 1 <= q <= m):
        raise IndexError(f"block index ({p}, {q}) out of range for {m} blocks")
    if x.shape != (dims[p - 1], dims[q - 1]):
        raise ShapeError(f"block ({p}, {q}) needs shape {(dims[p - 1], dims[q - 1])}, got {x.shape}")
    n = sum(dims)
    ro = sum(dims[:p - 1])
    co = sum(dims[:q - 1])
    z = x.field.zero
    rows = [[z] * n for _ in range(n)]
    for i in range(x.nrows):
        for j in range(x.ncols):
            rows[ro + i][co + j] = x.rows[i][j]
    return Matrix._raw(tuple(tuple(r) for r in rows), x.field, n)


def permutation_sign(perm) -> int:
    """Sign of a permutation given as a sequence of distinct sortable items."""
    perm = list(perm)
    index = {v: i for i, v in enumerate(sorted(perm))}
    seen = [False] * len(perm)
    sign = 1
    for start in range(len(perm)):
        if seen[start]:
            continue
        length = 0
        k = start
        while not seen[k]:
            seen[k] = True
            k = index[perm[k]]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign



def rank(a: Matrix) -> int:
    """Rank by fraction-free elimination on a copy of the rows (exact over fields)."""
    rows = [list(r) for r in a.rows]
    r = 0
    for c in range(a.ncols):
        pivot = next((i for i in range(r, len(rows)) if rows[i][c]), None)
        if pivot is None:
            continue
        rows[r], rows[pivot] = rows[pivot], rows[r]
        p = rows[r][c]
        for i in range(r + 1, len(rows)):
            f = rows[i][c]
            if f:
                rows[i] = [p * x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    return r
