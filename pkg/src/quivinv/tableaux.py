"""Tableaux with substitution, the bpf polynomial, and the determinant-pfaffian."""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import factorial, lcm, prod

from .fields import QQ, PrimeField
from .linalg import block_embed, partial_linearization_pf, permutation_sign
from .matrix import Matrix, ShapeError

DIRECT_CELL_CAP = 12


class TableauError(ValueError):
    pass


@dataclass(frozen=True)
class TableauArrow:
    tail: tuple  # (column, row), both 1-based
    head: tuple
    slot: int


class Tableau:
    """A shape (column lengths) with arrows pairing up all cells, and a slot per arrow."""

    def __init__(self, columns, arrows):
        self.columns = tuple(int(c) for c in columns)
        self.arrows = tuple(arrows)
        if any(c < 1 for c in self.columns):
            raise TableauError("column lengths must be positive")
        seen = set()
        for a in self.arrows:
            for cell in (a.tail, a.head):
                c, r = cell
                if not (1 <= c <= len(self.columns) and 1 <= r <= self.columns[c - 1]):
                    raise TableauError(f"cell {cell} is outside the shape {self.columns}")
                if cell in seen:
                    raise TableauError(f"cell {cell} is used by two arrows")
                seen.add(cell)
            if a.slot < 1:
                raise TableauError("slots are numbered from 1")
        if len(seen) != sum(self.columns):
            raise TableauError("every cell must be the head or the tail of an arrow")
        ends = {}
        for a in self.arrows:
            ce = (a.tail[0], a.head[0])
            if ends.setdefault(a.slot, ce) != ce:
                raise TableauError(f"arrows of slot {a.slot} join different columns")
        self.slot_columns = ends

    @property
    def cells(self):
        return sum(self.columns)

    @property
    def slot_count(self):
        return max((a.slot for a in self.arrows), default=0)

    def multiplicities(self):
        out = {}
        for a in self.arrows:
            out[a.slot] = out.get(a.slot, 0) + 1
        return out

    def c_T(self):
        return prod(factorial(k) for k in self.multiplicities().values())

    def slot_shape(self, slot):
        tail_col, head_col = self.slot_columns[slot]
        return (self.columns[tail_col - 1], self.columns[head_col - 1])

    def __eq__(self, other):
        return isinstance(other, Tableau) and (self.columns, self.arrows) == (other.columns, other.arrows)

    def __hash__(self):
        return hash((self.columns, self.arrows))

    def __repr__(self):
        return f"Tableau({list(self.columns)}, {len(self.arrows)} arrows)"

    def to_json(self):
        return {"columns": list(self.columns),
                "arrows": [{"head": list(a.head), "tail": list(a.tail), "slot": a.slot} for a in self.arrows]}

    @classmethod
    def from_json(cls, data):
        try:
            arrows = [TableauArrow(tuple(a["tail"]), tuple(a["head"]), int(a["slot"])) for a in data["arrows"]]
            return cls(data["columns"], arrows)
        except (KeyError, TypeError) as exc:
            raise TableauError(f"malformed tableau: {exc}") from exc

    def compact(self):
        """Short deterministic string used in descriptor ids."""
        arrows = ";".join(f"{a.tail[0]}.{a.tail[1]}>{a.head[0]}.{a.head[1]}:{a.slot}" for a in self.arrows)
        return "[" + ",".join(map(str, self.columns)) + "]" + arrows


def layout(columns, arrow_columns):
    """Place arrows given as (tail column, head column, slot) top to bottom, tail cell before head cell."""
    nxt = [1] * len(columns)
    arrows = []
    for tc, hc, slot in arrow_columns:
        tr = nxt[tc - 1]
        nxt[tc - 1] += 1
        hr = nxt[hc - 1]
        nxt[hc - 1] += 1
        arrows.append(TableauArrow((tc, tr), (hc, hr), slot))
    for c, n in enumerate(columns):
        if nxt[c] - 1 != n:
            raise TableauError(f"column {c + 1} of length {n} receives {nxt[c] - 1} arrow ends")
    return Tableau(columns, arrows)


def _check_matrices(t: Tableau, matrices):
    s = t.slot_count
    if len(matrices) < s:
        raise ShapeError(f"tableau uses {s} slots but {len(matrices)} matrices were given")
    fields = {m.field for m in matrices}
    if len(fields) > 1:
        raise ShapeError("slot matrices over different backends")
    for slot in t.multiplicities():
        want = t.slot_shape(slot)
        if matrices[slot - 1].shape != want:
            raise ShapeError(f"slot {slot} needs a {want[0]}x{want[1]} matrix, got {matrices[slot - 1].shape}")


def _bpf0_fast(t: Tableau, entries, zero, one):
    """Arrow-by-arrow expansion with memoization on the set of used (column, value) pairs.

    ``entries[slot]`` is a row-major list of lists of scalars.
    """
    offsets = [0]
    for n in t.columns:
        offsets.append(offsets[-1] + n)
    order = {c: [] for c in range(1, len(t.columns) + 1)}
    for a in t.arrows:
        order[a.tail[0]].append(a.tail[1])
        order[a.head[0]].append(a.head[1])
    row_sign = 1
    for rows in order.values():
        row_sign *= permutation_sign(rows)
    arrows = [(a.tail[0], a.head[0], entries[a.slot]) for a in t.arrows]
    cols = t.columns
    memo = {}
    count = len(arrows)

    def greater_used(used, col, v):
        base = offsets[col - 1]
        mask = (used >> (base + v + 1)) & ((1 << (cols[col - 1] - v - 1)) - 1)
        return bin(mask).count("1")

    def rec(k, used):
        if k == count:
            return one
        key = (k, used)
        hit = memo.get(key)
        if hit is not None:
            return hit
        tc, hc, x = arrows[k]
        tbase, hbase = offsets[tc - 1], offsets[hc - 1]
        total = zero
        for vt in range(cols[tc - 1]):
            bt = 1 << (tbase + vt)
            if used & bt:
                continue
            row = x[vt]
            used_t = used | bt
            st = greater_used(used, tc, vt)
            for vh in range(cols[hc - 1]):
                bh = 1 << (hbase + vh)
                if used_t & bh:
                    continue
                xv = row[vh]
                if not xv:
                    continue
                sub = rec(k + 1, used_t | bh)
                if not sub:
                    continue
                term = xv * sub
                if (st + greater_used(used_t, hc, vh)) % 2:
                    total = total - term
                else:
                    total = total + term
        memo[key] = total
        return total

    value = rec(0, 0)
    return value if row_sign > 0 else -value


def _bpf0_direct(t: Tableau, entries, zero, one):
    if t.cells > DIRECT_CELL_CAP:
        raise ValueError(f"direct summation is capped at {DIRECT_CELL_CAP} cells, tableau has {t.cells}")
    perms = [list(itertools.permutations(range(n))) for n in t.columns]
    signs = [[permutation_sign(p) for p in ps] for ps in perms]
    total = zero
    for choice in itertools.product(*(range(len(ps)) for ps in perms)):
        pis = [perms[c][i] for c, i in enumerate(choice)]
        term = one
        for a in t.arrows:
            x = entries[a.slot]
            term = term * x[pis[a.tail[0] - 1][a.tail[1] - 1]][pis[a.head[0] - 1][a.head[1] - 1]]
            if not term:
                break
        if not term:
            continue
        sign = prod(signs[c][i] for c, i in enumerate(choice))
        total = total + term if sign > 0 else total - term
    return total


def _entries(matrices):
    return {k + 1: [list(r) for r in m.rows] for k, m in enumerate(matrices)}


def bpf0(t: Tableau, matrices, method="fast", field=QQ):
    """The signed sum over products of column permutations, before division by c_T."""
    matrices = list(matrices)
    _check_matrices(t, matrices)
    if matrices:
        field = matrices[0].field
    run = _bpf0_fast if method == "fast" else _bpf0_direct
    return run(t, _entries(matrices), field.zero, field.one)


def bpf(t: Tableau, matrices, method="fast", field=QQ):
    """bpf0 / c_T, with the division carried out exactly over the integers where possible."""
    matrices = list(matrices)
    _check_matrices(t, matrices)
    if matrices:
        field = matrices[0].field
    run = _bpf0_fast if method == "fast" else _bpf0_direct
    c = t.c_T()
    mult = t.multiplicities()
    if field == QQ:
        scales = {}
        ints = {}
        for k, m in enumerate(matrices, start=1):
            d = lcm(*(x.denominator for x in m.entries())) if m.entries() else 1
            scales[k] = d
            ints[k] = [[int(x * d) for x in r] for r in m.rows]
        b0 = run(t, ints, 0, 1)
        if b0 % c:
            raise ArithmeticError(f"bpf0 = {b0} is not divisible by c_T = {c}")
        denom = prod(scales[s] ** r for s, r in mult.items())
        return Fraction(b0 // c, denom)
    if isinstance(field, PrimeField):
        ints = {k: [[x.value for x in r] for r in m.rows] for k, m in enumerate(matrices, start=1)}
        b0 = run(t, ints, 0, 1)
        if b0 % c:
            raise ArithmeticError(f"bpf0 = {b0} is not divisible by c_T = {c}")
        return field(b0 // c)
    return run(t, _entries(matrices), field.zero, field.one) * (Fraction(1, c))


@dataclass(frozen=True)
class TableauWithSubstitution:
    tableau: Tableau
    matrices: tuple

    def __post_init__(self):
        object.__setattr__(self, "matrices", tuple(self.matrices))
        _check_matrices(self.tableau, self.matrices)

    def bpf(self, method="fast"):
        return bpf(self.tableau, self.matrices, method)

    def bpf0(self, method="fast"):
        return bpf0(self.tableau, self.matrices, method)


# --- standard tableaux ------------------------------------------------------------

def pfaffian_tableau(n: int, slots=None) -> Tableau:
    """One column of length n; arrow i runs from row 2i-1 to row 2i."""
    if n % 2:
        raise TableauError("the pfaffian tableau needs even n")
    slots = list(slots) if slots is not None else [1] * (n // 2)
    if len(slots) != n // 2:
        raise TableauError("need one slot per arrow")
    return Tableau([n], [TableauArrow((1, 2 * i - 1), (1, 2 * i), s) for i, s in zip(range(1, n // 2 + 1), slots)])


def determinant_tableau(n: int, slots=None) -> Tableau:
    """Two columns of length n; arrow i runs from (1, i) to (2, i)."""
    slots = list(slots) if slots is not None else [1] * n
    if len(slots) != n:
        raise TableauError("need one slot per arrow")
    return Tableau([n, n], [TableauArrow((1, i), (2, i), s) for i, s in zip(range(1, n + 1), slots)])


def sigma_k_tableau(n: int, k: int) -> Tableau:
    """Determinant tableau with k arrows on slot 1 (X) and n - k on slot 2 (E)."""
    if not 1 <= k <= n:
        raise TableauError("need 1 <= k <= n")
    return determinant_tableau(n, [1] * k + [2] * (n - k))


def dp_tableau(t: int, r: int, s: int) -> Tableau:
    """Shape (t+2r, t+2s): t horizontal X-arrows, r vertical Y-arrows in column 1, s vertical Z-arrows in column 2."""
    arrows = [TableauArrow((1, i), (2, i), 1) for i in range(1, t + 1)]
    arrows += [TableauArrow((1, t + 2 * j - 1), (1, t + 2 * j), 2) for j in range(1, r + 1)]
    arrows += [TableauArrow((2, t + 2 * k - 1), (2, t + 2 * k), 3) for k in range(1, s + 1)]
    if t == 0 and (r == 0 or s == 0):
        # an empty column carries no arrows; drop it
        if r == 0 and s == 0:
            return Tableau([], [])
        keep = 1 if s == 0 else 2
        arrows = [TableauArrow((1, a.tail[1]), (1, a.head[1]), a.slot) for a in arrows]
        return Tableau([2 * (r if keep == 1 else s)], arrows)
    return Tableau([t + 2 * r, t + 2 * s], arrows)


def dp(r: int, s: int, x: Matrix, y: Matrix, z: Matrix):
    """bpf of the determinant-pfaffian tableau; equals +-DP_{r,s}, and DP_{r,s} itself when r == s."""
    t = x.nrows - 2 * r
    if t < 0 or x.ncols != t + 2 * s:
        raise ShapeError(f"X must be (t+2r)x(t+2s); got {x.shape} with r={r}, s={s}")
    if y.shape != (t + 2 * r, t + 2 * r) or z.shape != (t + 2 * s, t + 2 * s):
        raise ShapeError("Y must be (t+2r)-square and Z (t+2s)-square")
    return bpf(dp_tableau(t, r, s), [x, y, z])


def sigma_tr_via_dp(t: int, r: int, x: Matrix, y: Matrix, z: Matrix):
    n = t + 2 * r
    for m in (x, y, z):
        if m.shape != (n, n):
            raise ShapeError(f"sigma_(t,r) via DP needs {n}x{n} matrices")
    return dp(r, r, x, y, z)


# --- correspondence with block partial linearizations ----------------------------------

def bplp_sign(t: Tableau) -> int:
    """sgn of the permutation sending position 2i-1 / 2i to the global tail / head index of arrow i.

    Arrows are ordered by slot (stable), which is the order of the factors in
    the linearization formula.
    """
    offsets = [0]
    for n in t.columns:
        offsets.append(offsets[-1] + n)
    seq = []
    for a in sorted(t.arrows, key=lambda a: a.slot):
        seq.append(offsets[a.tail[0] - 1] + a.tail[1] - 1)
        seq.append(offsets[a.head[0] - 1] + a.head[1] - 1)
    return permutation_sign(seq)


def block_condition(r, blocks, dims):
    counts = [0] * len(dims)
    for k, (p, q) in zip(r, blocks):
        counts[p - 1] += k
        counts[q - 1] += k
    return counts == list(dims)


def tableau_from_bplp(r, blocks, dims):
    """Tableau for P_{r_1..r_s}(X_1^{p_1,q_1}, ...).

    ``blocks`` holds (p, q) or (p, q, X).  Returns (tableau, sign) with
    bpf(tableau, X) == sign * P_r(block embeddings), or (tws, sign) when the
    matrices are supplied.
    """
    r = list(r)
    dims = list(dims)
    if len(r) != len(blocks):
        raise TableauError("need one count per block")
    if any(k < 1 for k in r):
        raise TableauError("counts must be positive")
    pq = [(b[0], b[1]) for b in blocks]
    for p, q in pq:
        if not (1 <= p <= len(dims) and 1 <= q <= len(dims)):
            raise TableauError(f"block ({p}, {q}) out of range")
    if not block_condition(r, pq, dims):
        raise TableauError("block condition fails: arrow ends per column must equal the column length")
    cols = []
    for j, ((p, q), k) in enumerate(zip(pq, r), start=1):
        cols.extend([(p, q, j)] * k)
    t = layout(dims, cols)
    sign = bplp_sign(t)
    if all(len(b) == 3 for b in blocks):
        return TableauWithSubstitution(t, [b[2] for b in blocks]), sign
    return t, sign


def bplp_from_tableau(t: Tableau):
    """(r, blocks, sign, slots) with bpf == sign * P_r(X_j^{p_j, q_j}) over the used slots."""
    mult = t.multiplicities()
    slots = sorted(mult)
    r = [mult[j] for j in slots]
    blocks = [t.slot_columns[j] for j in slots]
    return r, blocks, bplp_sign(t), slots


def evaluate_bplp(r, blocks, dims, matrices, method="interpolate"):
    """P_r of the block embeddings of the given matrices."""
    emb = [block_embed(x, p, q, dims) for (p, q), x in zip(blocks, matrices)]
    return partial_linearization_pf(r, emb, method=method)
