"""Generator descriptors: sigma_t of closed paths and bpf of path tableaux.

Every generating set here is infinite in principle, so enumeration is always
capped by path length and total weight.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field
from functools import lru_cache

from .paths import (
    canonical_cyclic,
    canonical_cyclic_transpose,
    enumerate_closed_paths,
    enumerate_paths,
    head,
    tail,
    transpose_word,
    word_key,
)
from .quiver import (
    Arrow,
    MixedQuiverSetting,
    Quiver,
    SettingError,
    double_quiver,
    normalize_setting,
    require_valid,
)
from .tableaux import Tableau, layout

MATRIX_GROUPS = ("GL", "O", "SO", "Sp")


@dataclass(frozen=True)
class SigmaDescriptor:
    t: int
    word: tuple

    kind = "sigma"

    @property
    def id(self):
        return f"sigma{self.t}(" + " ".join(self.word) + ")"

    def to_json(self):
        return {"kind": "sigma", "t": self.t, "word": list(self.word)}


@dataclass(frozen=True)
class BpfDescriptor:
    tableau: Tableau
    slot_words: tuple
    weight: tuple = ()
    flags: tuple = dc_field(default=(), compare=False)

    kind = "bpf"

    @property
    def id(self):
        words = ",".join(" ".join(w) for w in self.slot_words)
        return f"bpf{self.tableau.compact()}{{{words}}}"

    def to_json(self):
        out = {"kind": "bpf", "tableau": self.tableau.to_json(),
               "slot_words": {str(k): list(w) for k, w in enumerate(self.slot_words, start=1)}}
        if self.weight:
            out["weight"] = list(self.weight)
        if self.flags:
            out["flags"] = list(self.flags)
        return out


def descriptor_from_json(data):
    kind = data.get("kind")
    if kind == "sigma":
        return SigmaDescriptor(int(data["t"]), tuple(data["word"]))
    if kind == "bpf":
        t = Tableau.from_json(data["tableau"])
        sw = data["slot_words"]
        words = tuple(tuple(sw[str(k)]) for k in range(1, len(sw) + 1))
        return BpfDescriptor(t, words, tuple(data.get("weight", ())), tuple(data.get("flags", ())))
    raise ValueError(f"unknown descriptor kind {kind!r}")


# --- sigma families ---------------------------------------------------------------

def _sigma_family(q: Quiver, dims, max_len, canon):
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    order = q.letter_order()
    reps = {}
    for w in enumerate_closed_paths(q, max_len):
        c = canon(w, order)
        reps.setdefault(c, None)
    words = sorted(reps, key=lambda w: (len(w), word_key(w, order)))
    out = []
    for w in words:
        n = dims[q.arrow(w[0]).head - 1]
        out.extend(SigmaDescriptor(t, w) for t in range(1, n + 1))
    return out


def quiver_invariant_generators(q: Quiver, dims, max_len: int):
    """sigma_t of closed paths of Q, one representative per cyclic class."""
    dims = tuple(dims)
    if len(dims) != q.vertex_count:
        raise SettingError("one dimension per vertex is required")
    return _sigma_family(q, dims, max_len, canonical_cyclic)


def _canon_transpose(qd: Quiver):
    def canon(w, order):
        if all(_tr(x) in qd for x in w):
            return canonical_cyclic_transpose(w, order)
        return canonical_cyclic(w, order)
    return canon


def _tr(x):
    return transpose_word((x,))[0]


@lru_cache(maxsize=64)
def prepared(s: MixedQuiverSetting):
    """(normalized setting, its double) for a valid base setting."""
    require_valid(s)
    ns = normalize_setting(s)
    return ns, double_quiver(ns)


def double_sigma_generators(s: MixedQuiverSetting, max_len: int, transpose_classes=True):
    """sigma_t of closed paths in Q^D, one per cyclic-and-transpose class (or per cyclic class)."""
    ns, d = prepared(s)
    canon = _canon_transpose(d.quiver) if transpose_classes else canonical_cyclic
    return _sigma_family(d.quiver, ns.dims, max_len, canon)


def supermixed_generators(s: MixedQuiverSetting, max_len: int):
    bad = [g for g in s.groups if g not in ("GL", "O", "Sp")]
    if bad:
        raise SettingError(f"setting has {sorted(set(bad))} vertices; use general_generators")
    return double_sigma_generators(s, max_len)


# --- tableau templates ------------------------------------------------------------

def weight_vectors(l, max_weight, allowed):
    """All weights with entries allowed per vertex and total <= max_weight, by total then lexicographically."""
    out = []
    for w in itertools.product(*(range(max_weight + 1) for _ in range(l))):
        if sum(w) <= max_weight and allowed(w):
            out.append(w)
    return sorted(out, key=lambda w: (sum(w), w))


def _canonical_template(cols, types, reversible):
    """Least sorted arrow-type multiset over column permutations inside each block."""
    blocks = {}
    for c, v in enumerate(cols):
        blocks.setdefault(v, []).append(c)
    best = None
    groups = list(blocks.values())
    for perms in itertools.product(*(itertools.permutations(g) for g in groups)):
        relabel = {}
        for g, p in zip(groups, perms):
            relabel.update(zip(g, p))
        mapped = []
        for ct, ch, w in types:
            a = (relabel[ct], relabel[ch], w)
            if reversible is not None and reversible(w):
                b = (relabel[ch], relabel[ct], transpose_word(w))
                a = min(a, b, key=_reversal_key)
            mapped.append(a)
        cand = tuple(sorted(mapped, key=_reversal_key))
        if best is None or [_reversal_key(x) for x in cand] < [_reversal_key(x) for x in best]:
            best = cand
    return best


def _reversal_key(a):
    return (a[0], a[1], len(a[2]), a[2])


def _multisets(cols, caps, types):
    """Multiplicity assignments over ``types`` filling every column exactly."""
    last = [-1] * len(cols)
    for k, (ct, ch, _) in enumerate(types):
        last[ct] = max(last[ct], k)
        last[ch] = max(last[ch], k)
    if any(x < 0 for x in last):
        return
    remaining = list(caps)
    chosen = []

    def rec(k):
        if k == len(types):
            if not any(remaining):
                yield list(chosen)
            return
        ct, ch, w = types[k]
        per = 2 if ct == ch else 1
        top = remaining[ct] // 2 if ct == ch else min(remaining[ct], remaining[ch])
        for m in range(top, -1, -1):
            remaining[ct] -= m if per == 1 else 2 * m
            if per == 1:
                remaining[ch] -= m
            ok = all(remaining[c] == 0 for c in (ct, ch) if last[c] == k)
            if ok:
                chosen.extend([types[k]] * m)
                yield from rec(k + 1)
                if m:
                    del chosen[-m:]
            remaining[ct] += m if per == 1 else 2 * m
            if per == 1:
                remaining[ch] += m

    yield from rec(0)


def _templates_for_weight(dims, weight, words_by_pair, reversible, flags=()):
    cols = [v for v in range(1, len(weight) + 1) for _ in range(weight[v - 1])]
    if not cols:
        return [BpfDescriptor(Tableau([], []), (), tuple(weight), tuple(flags))]
    caps = [dims[v - 1] for v in cols]
    if sum(caps) % 2:
        return []
    types = []
    for ct, vt in enumerate(cols):
        for ch, vh in enumerate(cols):
            for w in words_by_pair.get((vt, vh), ()):
                # the reversed arrow with the transposed word gives the same value up to sign
                if reversible is not None and reversible(w) \
                        and _reversal_key((ch, ct, transpose_word(w))) < _reversal_key((ct, ch, w)):
                    continue
                types.append((ct, ch, w))
    seen = {}
    for ms in _multisets(cols, caps, types):
        key = _canonical_template(cols, ms, reversible)
        seen.setdefault(key, None)
    out = []
    for key in sorted(seen, key=lambda k: [_reversal_key(a) for a in k]):
        out.append(_build(cols, [dims[v - 1] for v in cols], key, weight, flags))
    return out


def _build(cols, lengths, arrow_types, weight, flags):
    slots = {}
    for ct, ch, w in arrow_types:
        slots.setdefault((ct, ch, w), len(slots) + 1)
    t = layout(lengths, [(ct + 1, ch + 1, slots[(ct, ch, w)]) for ct, ch, w in arrow_types])
    words = tuple(w for (_, _, w) in sorted(slots, key=slots.get))
    return BpfDescriptor(t, words, tuple(weight), tuple(flags))


def general_allowed(s: MixedQuiverSetting):
    """Weight predicate for the normalized setting ``s``."""
    def allowed(w):
        for v in range(1, s.vertex_count + 1):
            g = s.group(v)
            wv, wi = w[v - 1], w[s.inv(v) - 1]
            if g in ("GL", "O", "Sp") and (wv or wi):
                return False
            if g == "SL" and wv and wi:
                return False
            if g == "SO" and (wv > 1 or (wv and s.inv(v) != v)):
                return False
        return sum(w) > 0 and sum(n * k for n, k in zip(s.dims, w)) % 2 == 0
    return allowed


def path_tableaux(s: MixedQuiverSetting, max_len: int, max_weight: int):
    """bpf descriptors of path QS^D-tableaux obeying the weight constraints, over the normalized setting."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    if max_weight < 0:
        raise ValueError("max_weight must be non-negative")
    ns, d = prepared(s)
    weights = weight_vectors(ns.vertex_count, max_weight, general_allowed(ns))
    if not weights:
        return []
    qd = d.quiver
    paths = enumerate_paths(qd, max_len)

    def reversible(word):
        return all(_tr(x) in qd for x in word)

    out = []
    for w in weights:
        words_by_pair = {}
        for p in paths:
            pair = (head(qd, p), ns.inv(tail(qd, p)))
            if w[pair[0] - 1] and w[pair[1] - 1]:
                words_by_pair.setdefault(pair, []).append(p)
        flags = ()
        if any(ns.group(v) == "SO" and w[v - 1] and ns.dim(v) % 2 for v in range(1, ns.vertex_count + 1)):
            flags = ("odd_so",)
        out.extend(_templates_for_weight(ns.dims, w, words_by_pair, reversible, flags))
    return out


def general_generators(s: MixedQuiverSetting, max_len: int, max_weight: int):
    return double_sigma_generators(s, max_len) + path_tableaux(s, max_len, max_weight)


def is_bipartite(q: Quiver) -> bool:
    heads = {a.head for a in q.arrows}
    tails = {a.tail for a in q.arrows}
    return not (heads & tails)


def bipartite_semiinvariant_tableaux(q: Quiver, dims, max_weight: int):
    """(Q, n)-tableaux with single-arrow slot words, all weights of total at most max_weight."""
    if not is_bipartite(q):
        raise SettingError("quiver is not bipartite: some vertex is both the head and the tail of arrows")
    dims = tuple(dims)
    if len(dims) != q.vertex_count:
        raise SettingError("one dimension per vertex is required")
    if max_weight < 0:
        raise ValueError("max_weight must be non-negative")
    even = lambda w: sum(n * k for n, k in zip(dims, w)) % 2 == 0  # noqa: E731
    out = []
    for w in weight_vectors(q.vertex_count, max_weight, even):
        words_by_pair = {}
        for a in q.arrows:
            if w[a.head - 1] and w[a.tail - 1]:
                words_by_pair.setdefault((a.head, a.tail), []).append((a.id,))
        out.extend(_templates_for_weight(dims, w, words_by_pair, reversible=None))
    return out


# --- matrix invariants ------------------------------------------------------------

def matrix_setting(group: str, n: int, d: int) -> MixedQuiverSetting:
    """One vertex with group ``group`` and d unconstrained loops X1..Xd."""
    if group not in MATRIX_GROUPS:
        raise SettingError(f"matrix invariants are defined for {MATRIX_GROUPS}, not {group!r}")
    if n < 1 or d < 1:
        raise SettingError("need n >= 1 and d >= 1")
    if group == "Sp" and n % 2:
        raise SettingError(f"Sp({n}) needs even n")
    q = Quiver(1, [Arrow(f"X{k}", 1, 1) for k in range(1, d + 1)])
    return MixedQuiverSetting(q, (n,), (group,), (1,))


def matrix_invariant_generators(group: str, n: int, d: int, max_len: int):
    s = matrix_setting(group, n, d)
    if group == "GL":
        return quiver_invariant_generators(s.quiver, s.dims, max_len)
    # words in X_k and X_k^T, one per cyclic class
    sigmas = double_sigma_generators(s, max_len, transpose_classes=False)
    if group == "SO" and n % 2 == 0:
        return sigmas + path_tableaux(s, max_len, 1)
    return sigmas


def setting_generators(s: MixedQuiverSetting, max_len: int, max_weight=None):
    """The generator family that applies to ``s``: plain, supermixed or general."""
    if s.is_plain():
        return quiver_invariant_generators(s.quiver, s.dims, max_len)
    if all(g in ("GL", "O", "Sp") for g in s.groups):
        return supermixed_generators(s, max_len)
    if max_weight is None:
        raise ValueError("settings with SL or SO vertices need a weight cap")
    return general_generators(s, max_len, max_weight)


def needs_weight_cap(s: MixedQuiverSetting) -> bool:
    return any(g in ("SL", "SO") for g in s.groups)


__all__ = [
    "BpfDescriptor", "SigmaDescriptor", "bipartite_semiinvariant_tableaux", "descriptor_from_json",
    "double_sigma_generators", "general_generators", "is_bipartite", "matrix_invariant_generators",
    "matrix_setting", "needs_weight_cap", "path_tableaux", "quiver_invariant_generators",
    "setting_generators", "supermixed_generators",
]
