"""Formal polynomials in sigma_l(word) and the trace identities built from them."""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .fields import QQ
from .linalg import char_poly_coeffs
from .paths import (SIGMA_ORDER, as_word, canonical_cyclic, canonical_cyclic_transpose, enumerate_closed_paths,
                    is_closed, is_path, is_primitive, multidegree, primitive_root, sigma_quiver, tail, head, transpose_word)
from .quiver import is_transposed, transpose_letter


class TraceSymbol(tuple):
    """sigma_level(word) for a canonical primitive closed word."""

    __slots__ = ()

    def __new__(cls, level, word):
        if level < 1:
            raise ValueError("sigma level must be positive")
        word = as_word(word)
        if not is_primitive(word):
            raise ValueError(f"trace symbols need primitive words, got {list(word)}")
        return super().__new__(cls, (level, word))

    @property
    def level(self):
        return self[0]

    @property
    def word(self):
        return self[1]

    def __repr__(self):
        w = "".join(self.word) if all(len(x) == 1 for x in self.word) else ".".join(self.word)
        return f"s{self.level}({w})"


def _mono_mul(m1, m2):
    d = dict(m1)
    for s, e in m2:
        d[s] = d.get(s, 0) + e
    return tuple(sorted(d.items()))


class TracePolynomial:
    """Polynomial with rational coefficients in commuting TraceSymbols.

    ``terms`` maps a monomial (sorted tuple of (symbol, exponent)) to a nonzero Fraction.
    """

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        clean = {}
        for mono, c in (terms or {}).items():
            c = Fraction(c)
            if c:
                clean[mono] = clean.get(mono, 0) + c
        self.terms = {m: c for m, c in clean.items() if c}

    @classmethod
    def constant(cls, c):
        return cls({(): c})

    @classmethod
    def symbol(cls, sym: TraceSymbol):
        return cls({((sym, 1),): 1})

    def is_zero(self):
        return not self.terms

    def __add__(self, other):
        if not isinstance(other, TracePolynomial):
            other = TracePolynomial.constant(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return TracePolynomial(out)

    __radd__ = __add__

    def __neg__(self):
        return TracePolynomial({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, TracePolynomial):
            c = Fraction(other)
            return TracePolynomial({m: c * v for m, v in self.terms.items()})
        out = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        return TracePolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k):
        out = TracePolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, TracePolynomial):
            other = TracePolynomial.constant(other)
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def symbols(self):
        return sorted({s for m in self.terms for s, _ in m})

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda mc: (sum(e * s.level * len(s.word) for s, e in mc[0]), repr(mc[0])))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in self.sorted_terms():
            body = "*".join(repr(s) if e == 1 else f"{s!r}^{e}" for s, e in mono)
            parts.append(f"{c}*{body}" if body else str(c))
        return " + ".join(parts)

    def substitute(self, mapping):
        """Replace every symbol by mapping(symbol) -> TracePolynomial."""
        out = TracePolynomial()
        cache = {}
        for mono, c in self.terms.items():
            term = TracePolynomial.constant(c)
            for s, e in mono:
                if s not in cache:
                    cache[s] = mapping(s)
                term = term * cache[s] ** e
            out = out + term
        return out

    def evaluate(self, assignment, field=QQ):
        return evaluate(self, assignment, field)

    def to_json(self):
        out = []
        for mono, c in self.sorted_terms():
            syms = []
            for s, e in mono:
                syms.extend({"level": s.level, "word": list(s.word)} for _ in range(e))
            out.append({"coeff": str(c), "symbols": syms})
        return out

    @classmethod
    def from_json(cls, data, order=None):
        out = cls()
        for term in data:
            t = cls.constant(Fraction(term["coeff"]))
            for s in term["symbols"]:
                t = t * sigma(s["level"], s["word"], order)
            out = out + t
        return out


# --- power reduction -------------------------------------------------------

def _poly_mul(p, q):
    out = {}
    for a, x in p.items():
        for b, y in q.items():
            k = tuple(i + j for i, j in zip(a, b))
            out[k] = out.get(k, 0) + x * y
    return {k: v for k, v in out.items() if v}


def _poly_add(p, q, scale=1):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + scale * v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def power_reduce_table(t: int, l: int):
    """Integer coefficients b with sigma_t(A^l) = sum_b b * prod_i sigma_i(A)^{e_i}.

    Keys are exponent vectors (e_1, ..., e_{tl}).  Computed on a diagonal
    matrix of eigenvalues: power sums p_k are written in elementary symmetric
    polynomials by Newton's identities, then e_t of the l-th powers is
    recovered from p_{kl}.
    """
    if t < 1 or l < 1:
        raise ValueError("power_reduce needs t >= 1 and l >= 1")
    n = t * l
    zero = (0,) * n

    def e(i):
        k = [0] * n
        k[i - 1] = 1
        return {tuple(k): Fraction(1)}

    # p[m] for m = 0..n in terms of e_1..e_n
    p = [None] * (n + 1)
    for m in range(1, n + 1):
        acc = {}
        em = e(m)
        acc = _poly_add(acc, em, (-1) ** (m - 1) * m)
        for i in range(1, m):
            acc = _poly_add(acc, _poly_mul(e(i), p[m - i]), (-1) ** (i - 1))
        p[m] = acc
    q = [None] + [p[k * l] for k in range(1, t + 1)]
    big_e = [{zero: Fraction(1)}]
    for k in range(1, t + 1):
        acc = {}
        for i in range(1, k + 1):
            acc = _poly_add(acc, _poly_mul(big_e[k - i], q[i]), (-1) ** (i - 1))
        big_e.append({key: v / k for key, v in acc.items()})
    out = {}
    for key, v in big_e[t].items():
        if v.denominator != 1:
            raise ArithmeticError(f"non-integral power reduction coefficient {v}")
        out[key] = int(v)
    return out


def power_reduce(t: int, l: int, word=("A",)):
    """sigma_t(A^l) as a TracePolynomial in sigma_i(A), i <= t*l, for the primitive word A."""
    word = as_word(word)
    out = {}
    for key, b in power_reduce_table(t, l).items():
        mono = tuple((TraceSymbol(i + 1, word), e) for i, e in enumerate(key) if e)
        out[mono] = b
    return TracePolynomial(out)


def sigma(level: int, word, order=None) -> TracePolynomial:
    """sigma_level(word) with the word rotated to canonical form and reduced to a primitive root."""
    word = as_word(word)
    if level == 0:
        return TracePolynomial.constant(1)
    root, l = primitive_root(canonical_cyclic(word, order))
    root = canonical_cyclic(root, order)
    if l == 1:
        return TracePolynomial.symbol(TraceSymbol(level, root))
    return power_reduce(level, l, root)


# --- Amitsur's formula ------------------------------------------------------

def lyndon_words(k: int, max_len: int):
    """Lyndon words over 0..k-1 of length <= max_len (Duval's generation order)."""
    if k == 0:
        return []
    out = []
    w = [-1]
    while w:
        w[-1] += 1
        out.append(tuple(w))
        m = len(w)
        while len(w) < max_len:
            w.append(w[len(w) - m])
        while w and w[-1] == k - 1:
            w.pop()
    return out


def _selections(items, weights, total):
    """Pick distinct items with multiplicities j >= 1 so that sum j * weight == total."""
    result = []

    def rec(idx, remaining, chosen):
        if remaining == 0:
            result.append(list(chosen))
            return
        if idx == len(items):
            return
        w = weights[idx]
        rec(idx + 1, remaining, chosen)
        j = 1
        while j * w <= remaining:
            chosen.append((items[idx], j))
            rec(idx + 1, remaining - j * w, chosen)
            chosen.pop()
            j += 1

    rec(0, total, [])
    return result


def amitsur_expand(t: int, summands, order=None) -> TracePolynomial:
    """sigma_t(a_1 A_1 + ... + a_p A_p) as a polynomial in sigma_l of primitive words."""
    if t < 1:
        raise ValueError("amitsur_expand needs t >= 1")
    summands = [(Fraction(a), as_word(w)) for a, w in summands]
    p = len(summands)
    cycles = lyndon_words(p, t)
    out = TracePolynomial()
    for sel in _selections(cycles, [len(c) for c in cycles], t):
        sign = (-1) ** (t - sum(j for _, j in sel))
        term = TracePolynomial.constant(sign)
        for c, j in sel:
            coeff = Fraction(1)
            word = ()
            for i in c:
                coeff *= summands[i][0]
                word += summands[i][1]
            if not coeff:
                term = TracePolynomial()
                break
            term = term * (sigma(j, word, order) * coeff ** j)
        out = out + term
    return out


# --- sigma_{t,r} ---------------------------------------------------------------

@lru_cache(maxsize=None)
def sigma_tr_classes(max_len: int):
    """Canonical representatives of primitive closed paths of the sigma quiver up to rotation and transpose."""
    q = sigma_quiver()
    reps = set()
    for w in enumerate_closed_paths(q, max_len):
        if is_primitive(w):
            reps.add(canonical_cyclic_transpose(w, SIGMA_ORDER))
    return sorted(reps, key=lambda w: (len(w), [SIGMA_ORDER[x] for x in w]))


def sigma_tr_terms(t: int, r: int):
    """[(sign, [(word, j), ...]), ...] for the defining sum of sigma_{t,r}."""
    if t < 0 or r < 0:
        raise ValueError("t and r must be non-negative")
    if t == 0 and r == 0:
        return [(1, [])]
    target = (t, r, r)
    classes = [w for w in sigma_tr_classes(t + 2 * r)
               if all(d <= g for d, g in zip(multidegree(w), target))]
    degs = [multidegree(w) for w in classes]
    out = []

    def rec(idx, remaining, chosen):
        if remaining == (0, 0, 0):
            exponent = t + sum(j * (w.count("Y") + w.count("Z") + 1) for w, j in chosen)
            out.append(((-1) ** exponent, list(chosen)))
            return
        if idx == len(classes):
            return
        rec(idx + 1, remaining, chosen)
        d = degs[idx]
        j = 1
        while True:
            rem = tuple(x - j * y for x, y in zip(remaining, d))
            if min(rem) < 0:
                break
            chosen.append((classes[idx], j))
            rec(idx + 1, rem, chosen)
            chosen.pop()
            j += 1

    rec(0, target, [])
    return out


def sigma_tr_symbolic(t: int, r: int) -> TracePolynomial:
    out = TracePolynomial()
    for sign, chosen in sigma_tr_terms(t, r):
        term = TracePolynomial.constant(sign)
        for w, j in chosen:
            term = term * TracePolynomial.symbol(TraceSymbol(j, w))
        out = out + term
    return out


def _expand_letter(letter, sums):
    """Linear combination of words substituted for a sigma-quiver letter."""
    base = sums[letter[0]]
    if is_transposed(letter):
        return [(a, transpose_word(w)) for a, w in base]
    return base


def sigma_tr_substituted(t: int, r: int, xs, ys, zs, order=None) -> TracePolynomial:
    """sigma_{t,r}(sum a_i A_i, sum b_j B_j, sum c_k C_k) expanded into sigma_l of primitive words."""
    sums = {"X": [(Fraction(a), as_word(w)) for a, w in xs],
            "Y": [(Fraction(a), as_word(w)) for a, w in ys],
            "Z": [(Fraction(a), as_word(w)) for a, w in zs]}
    cache = {}
    out = TracePolynomial()
    for sign, chosen in sigma_tr_terms(t, r):
        term = TracePolynomial.constant(sign)
        for w, j in chosen:
            key = (w, j)
            if key not in cache:
                expanded = {}
                for combo in itertools.product(*(_expand_letter(x, sums) for x in w)):
                    coeff = Fraction(1)
                    word = ()
                    for a, piece in combo:
                        coeff *= a
                        word += piece
                    if coeff:
                        expanded[word] = expanded.get(word, 0) + coeff
                summands = [(c, wd) for wd, c in expanded.items() if c]
                cache[key] = amitsur_expand(j, summands, order) if summands else TracePolynomial()
            term = term * cache[key]
        out = out + term
    return out


# --- evaluation --------------------------------------------------------------

def word_matrix_from_assignment(assignment):
    """Turn {letter: Matrix} into a word -> Matrix function; x^T defaults to the transpose of x."""
    if callable(assignment):
        return assignment

    def value(word):
        acc = None
        for x in word:
            if x in assignment:
                m = assignment[x]
            elif transpose_letter(x) in assignment and is_transposed(x):
                m = assignment[transpose_letter(x)].T
            else:
                raise KeyError(f"no matrix assigned to letter {x!r}")
            if acc is None:
                acc = m
            else:
                if acc.ncols != m.nrows:
                    raise ValueError(f"shape mismatch at letter {x!r} of word {list(word)}")
                acc = acc * m
        if not acc.is_square:
            raise ValueError(f"word {list(word)} does not evaluate to a square matrix")
        return acc

    return value


def evaluate(p: TracePolynomial, assignment, field=QQ):
    """Substitute sigma_l(word) -> l-th characteristic coefficient of the word's matrix.

    Levels above the matrix size evaluate to zero.
    """
    value = word_matrix_from_assignment(assignment)
    coeffs = {}
    total = field.zero
    for mono, c in p.terms.items():
        term = field(c)
        for s, e in mono:
            if s.word not in coeffs:
                coeffs[s.word] = char_poly_coeffs(value(s.word))
            cp = coeffs[s.word]
            x = cp[s.level - 1] if s.level <= len(cp) else field.zero
            for _ in range(e):
                term = term * x
            if not term:
                break
        total = total + term
    return total


def sigma_of_sum(t, summands, assignment, field=QQ):
    """Direct oracle: sigma_t of the evaluated linear combination."""
    value = word_matrix_from_assignment(assignment)
    acc = None
    for a, w in summands:
        m = value(as_word(w)).scale(field(Fraction(a)))
        acc = m if acc is None else acc + m
    cp = char_poly_coeffs(acc)
    return cp[t - 1] if t <= len(cp) else field.zero


# --- relation families ---------------------------------------------------------

def relation_instance(kind: str, *, t: int, quiver=None, order=None, alpha=None, beta=None, summands=None,
                      r: int = 0, xs=None, ys=None, zs=None, involution=None) -> TracePolynomial:
    """Left-hand side of a relation of family a), b) or c).

    a) sigma_t(alpha beta) - sigma_t(beta alpha);
    b) sigma_t(sum a_i A_i), which vanishes on matrices smaller than t;
    c) sigma_{t,r}(sum a_i A_i, sum b_j B_j, sum c_k C_k), which vanishes when t + 2r exceeds the size.

    With ``quiver`` given, composability and incidence of the words are checked.
    """
    if kind == "a":
        alpha, beta = as_word(alpha), as_word(beta)
        if quiver is not None and not is_closed(quiver, alpha + beta):
            raise ValueError("alpha beta must be a closed path")
        return sigma(t, alpha + beta, order) - sigma(t, beta + alpha, order)
    if kind == "b":
        if not summands:
            raise ValueError("relation b) needs at least one summand")
        if quiver is not None:
            vertices = set()
            for _, w in summands:
                if not is_closed(quiver, w):
                    raise ValueError(f"summand {list(w)} is not a closed path")
                vertices.add(head(quiver, w))
            if len(vertices) != 1:
                raise ValueError("summands must be incident to a common vertex")
        return amitsur_expand(t, summands, order)
    if kind == "c":
        if not xs or not ys or not zs:
            raise ValueError("relation c) needs three nonempty linear combinations")
        if quiver is not None:
            _check_triple(quiver, xs, ys, zs, involution)
        return sigma_tr_substituted(t, r, xs, ys, zs, order)
    raise ValueError(f"unknown relation family {kind!r}; expected a, b or c")


def _check_triple(quiver, xs, ys, zs, involution):
    inv = (lambda v: v) if involution is None else (lambda v: involution[v - 1])
    vs = set()
    for _, w in xs:
        if not is_closed(quiver, w):
            raise ValueError(f"{list(w)} is not a closed path")
        vs.add(head(quiver, w))
    if len(vs) != 1:
        raise ValueError("the X-words must be incident to one vertex")
    v = vs.pop()
    for _, w in ys:
        if not is_path(quiver, w) or head(quiver, w) != v or tail(quiver, w) != inv(v):
            raise ValueError(f"{list(w)} must run from i(v) to v")
    for _, w in zs:
        if not is_path(quiver, w) or head(quiver, w) != inv(v) or tail(quiver, w) != v:
            raise ValueError(f"{list(w)} must run from v to i(v)")
