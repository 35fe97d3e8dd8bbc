"""Evaluating generator descriptors, fingerprints, separation and invariance checks."""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field

from .fields import QQ, Dual, DualField
from .generators import BpfDescriptor, SigmaDescriptor, prepared
from .linalg import char_poly_coeffs, rank
from .matrix import Matrix
from .paths import is_closed, is_path, path_value
from .quiver import (
    MixedQuiverSetting,
    Representation,
    act,
    base_setting,
    sample_group_element,
    sample_representation,
)
from .tableaux import bpf

SEMISIMPLE_CAVEAT = ("representations that are not semisimple can share every invariant value "
                     "without being isomorphic")
CAP_CAVEAT = "only the capped descriptor set was compared; the full generating set is infinite"


def _double(rep: Representation):
    return prepared(rep.setting)


def evaluate_descriptor(d, rep: Representation):
    ns, dbl = _double(rep)
    q = dbl.quiver
    if isinstance(d, SigmaDescriptor):
        if not is_closed(q, d.word):
            raise ValueError(f"word {list(d.word)} is not a closed path of the double quiver")
        n = ns.dim(q.arrow(d.word[0]).head)
        if not 1 <= d.t <= n:
            raise ValueError(f"level {d.t} outside 1..{n} for word {list(d.word)}")
        return char_poly_coeffs(path_value(rep, d.word))[d.t - 1]
    if isinstance(d, BpfDescriptor):
        mats = []
        for w in d.slot_words:
            if not is_path(q, w):
                raise ValueError(f"slot word {list(w)} is not a path of the double quiver")
            mats.append(path_value(rep, w))
        return bpf(d.tableau, mats, field=rep.field)
    raise TypeError(f"not a descriptor: {d!r}")


def fingerprint(rep: Representation, descriptors):
    """[(descriptor id, exact value)] in the order of ``descriptors``."""
    return [(d.id, evaluate_descriptor(d, rep)) for d in descriptors]


@dataclass(frozen=True)
class Separation:
    equal: bool
    descriptor: str = None
    values: tuple = ()
    caveats: tuple = ()
    caps: dict = dc_field(default_factory=dict)

    def to_json(self, field=QQ):
        out = {"verdict": "equal" if self.equal else "distinguished"}
        if not self.equal:
            out["descriptor"] = self.descriptor
            out["values"] = [field.to_json(v) for v in self.values]
        out["caveats"] = list(self.caveats)
        out["caps"] = dict(self.caps)
        return out


def separate(rep1: Representation, rep2: Representation, descriptors, caps=None):
    """First descriptor whose values differ, or an Equal verdict carrying its caveats."""
    if base_setting(rep1.setting) != base_setting(rep2.setting):
        raise ValueError("representations belong to different settings")
    for d in descriptors:
        a = evaluate_descriptor(d, rep1)
        b = evaluate_descriptor(d, rep2)
        if a != b:
            return Separation(False, d.id, (a, b), caps=dict(caps or {}))
    return Separation(True, caveats=(SEMISIMPLE_CAVEAT, CAP_CAVEAT), caps=dict(caps or {}))


def character(g, ns: MixedQuiverSetting, weight):
    """prod_v det(g_v)^{w_v} over the normalized setting ``ns``; mirror vertices use the dual component."""
    base_n = g.setting.vertex_count
    out = None
    for u, w in enumerate(weight, start=1):
        if not w:
            continue
        if u <= base_n:
            dv = g.det(u)
        else:
            dv = 1 / g.det(ns.inv(u))
        term = dv ** w
        out = term if out is None else out * term
    return 1 if out is None else out


def _special_weight(d, ns):
    return isinstance(d, BpfDescriptor) and any(
        w and ns.group(v) in ("SL", "SO") for v, w in enumerate(d.weight, start=1))


def invariance_suite(descriptors, setting: MixedQuiverSetting, trials: int, seed, field=QQ):
    """Check value(g . rep) == value(rep) on random pairs; SL/SO tableaux also get det-power covariance under GL/O samples.

    Trial k uses ``random.Random(f"{seed}:{k}")``; that string is the reproducer.
    """
    setting = base_setting(setting)
    ns, _ = prepared(setting)
    stats = {d.id: {"id": d.id, "pass": 0, "fail": 0, "reproducers": []} for d in descriptors}
    covariant = {d.id for d in descriptors if _special_weight(d, ns)}
    for d in descriptors:
        if d.id not in covariant:
            continue
        stats[d.id].update({"covariance_pass": 0, "covariance_fail": 0})
    errors = []
    for k in range(trials):
        tag = f"{seed}:{k}"
        rng = random.Random(tag)
        rep = sample_representation(setting, rng, field)
        g = sample_group_element(setting, rng, field)
        moved = act(g, rep)
        wide = sample_group_element(setting, rng, field, relax_special=True) if covariant else None
        moved_wide = act(wide, rep) if covariant else None
        for d in descriptors:
            st = stats[d.id]
            try:
                before = evaluate_descriptor(d, rep)
                after = evaluate_descriptor(d, moved)
            except (ValueError, ArithmeticError, KeyError) as exc:
                st["fail"] += 1
                st["reproducers"].append(tag)
                st["error"] = str(exc)
                errors.append({"id": d.id, "trial": tag, "error": str(exc)})
                continue
            if before == after:
                st["pass"] += 1
            else:
                st["fail"] += 1
                st["reproducers"].append(tag)
            if d.id in covariant:
                expected = character(wide, ns, d.weight) * before
                if evaluate_descriptor(d, moved_wide) == expected:
                    st["covariance_pass"] += 1
                else:
                    st["covariance_fail"] += 1
                    st["reproducers"].append(tag + ":relaxed")
    failures = sum(st["fail"] + st.get("covariance_fail", 0) for st in stats.values())
    return {
        "trials": trials,
        "seed": seed,
        "field": getattr(field, "name", str(field)),
        "descriptors": [stats[d.id] for d in descriptors],
        "failures": failures,
        "errors": errors,
        "ok": failures == 0,
    }


def form_basis(form, nrows, ncols, field=QQ):
    """A basis of the matrix subspace dictated by an arrow form."""
    def unit(i, j):
        rows = [[field.zero] * ncols for _ in range(nrows)]
        rows[i][j] = field.one
        return Matrix(rows, field)

    if form == "M":
        return [unit(i, j) for i in range(nrows) for j in range(ncols)]
    if form in ("S+", "L+"):
        sym = [unit(i, j) + unit(j, i) if i != j else unit(i, i) for i in range(nrows) for j in range(i, nrows)]
    else:
        sym = [unit(i, j) - unit(j, i) for i in range(nrows) for j in range(i + 1, nrows)]
    if form in ("S+", "S-"):
        return sym
    return [-(s * Matrix.J(nrows, field)) for s in sym]


def jacobian(descriptors, rep: Representation):
    """Exact Jacobian of the descriptor values in the coordinates of the representation space."""
    if rep.field != QQ:
        raise ValueError("the Jacobian is computed over the rational backend")
    dual = DualField(QQ)
    lift = lambda m: m.map(dual, dual)  # noqa: E731
    s = rep.setting
    cols = []
    for a in s.quiver.arrows:
        for b in form_basis(a.form, s.dim(a.head), s.dim(a.tail)):
            mats = {k: lift(m) for k, m in rep.matrices.items()}
            h = rep[a.id]
            mats[a.id] = Matrix([[dual(x) + _eps(y) for x, y in zip(hr, br)] for hr, br in zip(h.rows, b.rows)], dual)
            moved = Representation(s, mats, dual, check=False)
            cols.append([_tangent(evaluate_descriptor(d, moved)) for d in descriptors])
    return Matrix([[c[i] for c in cols] for i in range(len(descriptors))]) if cols else Matrix.zeros(len(descriptors), 0)


def _eps(y):
    return Dual(QQ.zero, QQ(y))


def _tangent(x):
    return x.b if hasattr(x, "b") else QQ.zero


def jacobian_rank(descriptors, rep: Representation) -> int:
    return rank(jacobian(descriptors, rep))
