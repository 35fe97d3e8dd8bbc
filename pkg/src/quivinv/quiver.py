"""Quivers, mixed quiver settings, representations and the group action."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Optional

from .fields import QQ
from .matrix import Matrix, ShapeError

GROUPS = ("GL", "O", "Sp", "SL", "SO")
FORMS = ("M", "S+", "S-", "L+", "L-")
TRANSPOSE = "^T"


class SettingError(ValueError):
    """Structurally malformed quiver data (bad indices, unknown labels)."""


def is_transposed(letter: str) -> bool:
    return letter.endswith(TRANSPOSE)


def base_letter(letter: str) -> str:
    return letter[: -len(TRANSPOSE)] if is_transposed(letter) else letter


def transpose_letter(letter: str) -> str:
    return base_letter(letter) if is_transposed(letter) else letter + TRANSPOSE


@dataclass(frozen=True)
class Arrow:
    id: str
    head: int
    tail: int
    form: str = "M"

    @property
    def is_loop(self):
        return self.head == self.tail


class Quiver:
    """Finite directed multigraph on vertices 1..l; loops and parallel arrows allowed."""

    def __init__(self, vertex_count: int, arrows):
        self.vertex_count = vertex_count
        self.arrows = tuple(arrows)
        self._by_id = {}
        for k, a in enumerate(self.arrows):
            if a.id in self._by_id:
                raise SettingError(f"duplicate arrow id {a.id!r}")
            for end in (a.head, a.tail):
                if not 1 <= end <= vertex_count:
                    raise SettingError(f"arrow {a.id!r} touches vertex {end} outside 1..{vertex_count}")
            if a.form not in FORMS:
                raise SettingError(f"unknown form label {a.form!r} on arrow {a.id!r}")
            self._by_id[a.id] = k

    def arrow(self, arrow_id: str) -> Arrow:
        try:
            return self.arrows[self._by_id[arrow_id]]
        except KeyError:
            raise KeyError(f"no arrow {arrow_id!r} in quiver") from None

    def __contains__(self, arrow_id):
        return arrow_id in self._by_id

    def index(self, arrow_id: str) -> int:
        return self._by_id[arrow_id]

    def letter_order(self):
        return dict(self._by_id)

    def out_of(self, vertex):
        """Arrows whose head is ``vertex`` (the next letter of a path continues at their tail)."""
        return [a for a in self.arrows if a.head == vertex]

    def adjacency(self):
        """l x l integer matrix counting arrows with given head (row) and tail (column)."""
        m = [[0] * self.vertex_count for _ in range(self.vertex_count)]
        for a in self.arrows:
            m[a.head - 1][a.tail - 1] += 1
        return m

    def __eq__(self, other):
        return isinstance(other, Quiver) and (self.vertex_count, self.arrows) == (other.vertex_count, other.arrows)

    def __hash__(self):
        return hash((self.vertex_count, self.arrows))

    def __repr__(self):
        return f"Quiver({self.vertex_count}, {list(self.arrows)!r})"


@dataclass(frozen=True)
class Violation:
    condition: str
    message: str


@dataclass(frozen=True)
class MixedQuiverSetting:
    quiver: Quiver
    dims: tuple
    groups: tuple
    involution: tuple
    # set on the output of double_quiver: the setting it was built from
    base: Optional["MixedQuiverSetting"] = dc_field(default=None, compare=False)

    def __post_init__(self):
        l = self.quiver.vertex_count
        object.__setattr__(self, "dims", tuple(self.dims))
        object.__setattr__(self, "groups", tuple(self.groups))
        object.__setattr__(self, "involution", tuple(self.involution))
        if len(self.dims) != l or len(self.groups) != l or len(self.involution) != l:
            raise SettingError("dims, groups and involution need one entry per vertex")
        for d in self.dims:
            if not isinstance(d, int) or isinstance(d, bool) or d < 1:
                raise SettingError(f"dimension {d!r} is not a positive integer")
        for g in self.groups:
            if g not in GROUPS:
                raise SettingError(f"unknown group label {g!r}")
        for v in self.involution:
            if not 1 <= v <= l:
                raise SettingError(f"involution value {v} outside 1..{l}")

    @property
    def vertex_count(self):
        return self.quiver.vertex_count

    @property
    def is_double(self):
        return self.base is not None

    def dim(self, v):
        return self.dims[v - 1]

    def group(self, v):
        return self.groups[v - 1]

    def inv(self, v):
        return self.involution[v - 1]

    def is_plain(self):
        """All GL, identity involution, all arrows unconstrained: an ordinary quiver setting."""
        return (all(g == "GL" for g in self.groups)
                and all(self.inv(v) == v for v in range(1, self.vertex_count + 1))
                and all(a.form == "M" for a in self.quiver.arrows))

    def satisfies_eq_condition(self):
        return all(not (self.group(v) in ("GL", "SL") and self.inv(v) == v)
                   for v in range(1, self.vertex_count + 1))


def plain_setting(quiver: Quiver, dims) -> MixedQuiverSetting:
    l = quiver.vertex_count
    return MixedQuiverSetting(quiver, tuple(dims), ("GL",) * l, tuple(range(1, l + 1)))


def validate_setting(s: MixedQuiverSetting, characteristic: int = 0) -> Optional[Violation]:
    """Return the first violated condition among a)..i), or None when the setting is valid."""
    l = s.vertex_count
    vs = range(1, l + 1)
    for v in vs:
        if s.group(v) == "Sp" and s.dim(v) % 2:
            return Violation("a", f"vertex {v} has group Sp but odd dimension {s.dim(v)}")
    for v in vs:
        if s.group(v) in ("O", "SO") and characteristic == 2:
            return Violation("b", f"vertex {v} has an orthogonal group in characteristic 2")
    for v in vs:
        if s.inv(s.inv(v)) != v:
            return Violation("c", f"involution is not an involution at vertex {v}")
    for v in vs:
        if s.dim(s.inv(v)) != s.dim(v):
            return Violation("d", f"dimension of vertex {v} differs from its partner {s.inv(v)}")
    for v in vs:
        if s.group(v) in ("O", "Sp", "SO") and s.inv(v) != v:
            return Violation("e", f"vertex {v} has group {s.group(v)} but is not fixed by the involution")
    arrows = s.quiver.arrows
    for a in arrows:
        if a.form != "M" and s.dim(a.head) != s.dim(a.tail):
            return Violation("f", f"arrow {a.id} has form {a.form} between dimensions {s.dim(a.head)} and {s.dim(a.tail)}")
    for a in arrows:
        if a.is_loop and a.form in ("S+", "S-") and s.group(a.head) not in ("O", "SO"):
            return Violation("g", f"loop {a.id} has form {a.form} at a {s.group(a.head)} vertex")
    for a in arrows:
        if a.is_loop and a.form in ("L+", "L-") and s.group(a.head) != "Sp":
            return Violation("h", f"loop {a.id} has form {a.form} at a {s.group(a.head)} vertex")
    for a in arrows:
        if not a.is_loop and a.form != "M":
            if s.inv(a.head) != a.tail or a.form not in ("S+", "S-"):
                return Violation("i", f"non-loop arrow {a.id} with form {a.form} violates condition i)")
    return None


def require_valid(s: MixedQuiverSetting, characteristic: int = 0):
    bad = validate_setting(s, characteristic)
    if bad is not None:
        raise ValueError(f"invalid mixed quiver setting: condition {bad.condition}): {bad.message}")


def normalize_setting(s: MixedQuiverSetting) -> MixedQuiverSetting:
    """Give every GL/SL vertex fixed by the involution a mirror vertex appended at the end."""
    if s.is_double:
        raise ValueError("normalize the base setting, not its double")
    dims = list(s.dims)
    groups = list(s.groups)
    inv = list(s.involution)
    for v in range(1, s.vertex_count + 1):
        if s.group(v) in ("GL", "SL") and s.inv(v) == v:
            dims.append(s.dim(v))
            groups.append(s.group(v))
            inv.append(v)
            inv[v - 1] = len(inv)
    if len(dims) == s.vertex_count:
        return s
    q = Quiver(len(dims), s.quiver.arrows)
    return MixedQuiverSetting(q, tuple(dims), tuple(groups), tuple(inv))


def double_quiver(s: MixedQuiverSetting) -> MixedQuiverSetting:
    """The mixed double setting: each M arrow alpha gets a partner alpha^T right after it."""
    if s.is_double:
        raise ValueError("double_quiver is defined on base settings only; got a double setting")
    if not s.satisfies_eq_condition():
        raise ValueError("double_quiver needs a normalized setting (GL/SL vertices must not be fixed by the involution)")
    for a in s.quiver.arrows:
        if TRANSPOSE in a.id:
            raise SettingError(f"arrow id {a.id!r} may not contain {TRANSPOSE!r}")
    arrows = []
    for a in s.quiver.arrows:
        arrows.append(a)
        if a.form == "M":
            arrows.append(Arrow(a.id + TRANSPOSE, s.inv(a.tail), s.inv(a.head), "M"))
    q = Quiver(s.vertex_count, arrows)
    return MixedQuiverSetting(q, s.dims, s.groups, s.involution, base=s)


def base_setting(s: MixedQuiverSetting) -> MixedQuiverSetting:
    return s.base if s.is_double else s


def check_form(form: str, h: Matrix) -> bool:
    if form == "M":
        return True
    if form == "S+":
        return h.is_symmetric()
    if form == "S-":
        return h.is_skew()
    if not h.is_square or h.nrows % 2:
        return False
    hj = h * Matrix.J(h.nrows, h.field)
    return hj.is_symmetric() if form == "L+" else hj.is_skew()


class Representation:
    """One matrix h_alpha of shape n_head x n_tail per arrow of a base setting."""

    def __init__(self, setting: MixedQuiverSetting, matrices: dict, field=None, check=True):
        setting = base_setting(setting)
        self.setting = setting
        if field is None:
            field = next(iter(matrices.values())).field if matrices else QQ
        self.field = field
        if check and field.characteristic == 2 and any(g in ("O", "SO") for g in setting.groups):
            raise ValueError("orthogonal groups need a field of characteristic other than 2")
        mats = {}
        for a in setting.quiver.arrows:
            if a.id not in matrices:
                raise ShapeError(f"representation is missing arrow {a.id!r}")
            h = matrices[a.id]
            want = (setting.dim(a.head), setting.dim(a.tail))
            if h.shape != want:
                raise ShapeError(f"arrow {a.id!r} needs shape {want}, got {h.shape}")
            if h.field != field:
                raise ShapeError(f"arrow {a.id!r} is over {h.field!r}, expected {field!r}")
            if check and not check_form(a.form, h):
                raise ValueError(f"matrix for arrow {a.id!r} is not in the {a.form} subspace")
            mats[a.id] = h
        extra = set(matrices) - set(mats)
        if extra:
            raise ShapeError(f"unknown arrows in representation: {sorted(extra)}")
        self.matrices = mats

    def __getitem__(self, arrow_id):
        return self.matrices[arrow_id]

    def __eq__(self, other):
        return isinstance(other, Representation) and self.matrices == other.matrices

    def __repr__(self):
        return f"Representation({self.matrices!r})"

    def map(self, fn, field):
        return Representation(self.setting, {k: fn(m) for k, m in self.matrices.items()}, field, check=False)


def phi_D_value(letter: str, rep: Representation) -> Matrix:
    """Matrix substituted for a letter of the double quiver."""
    s = rep.setting
    a = s.quiver.arrow(base_letter(letter))
    h = rep[a.id]
    if not is_transposed(letter):
        return h
    if a.form != "M":
        raise ValueError(f"arrow {a.id!r} has form {a.form}; only M arrows have a transpose partner")
    ht = h.T
    head_sp = s.group(a.head) == "Sp"
    tail_sp = s.group(a.tail) == "Sp"
    if head_sp:
        ht = ht * Matrix.J(s.dim(a.head), h.field)
    if tail_sp:
        ht = Matrix.J(s.dim(a.tail), h.field) * ht
    return ht


def in_group(group: str, g: Matrix) -> bool:
    if not g.is_square:
        return False
    e = Matrix.identity(g.nrows, g.field)
    if group == "GL":
        return bool(g.det())
    if group == "SL":
        return g.det() == g.field.one
    if group == "O":
        return g * g.T == e
    if group == "SO":
        return g * g.T == e and g.det() == g.field.one
    if group == "Sp":
        if g.nrows % 2:
            return False
        j = Matrix.J(g.nrows, g.field)
        return g.T * j * g == j
    raise SettingError(f"unknown group {group!r}")


class GroupElement:
    """Element of G(n, g, i): stores g_v only for v <= i(v); partners are (g_v^{-1})^T."""

    def __init__(self, setting: MixedQuiverSetting, components: dict, check=True, groups=None):
        setting = base_setting(setting)
        self.setting = setting
        self.components = {}
        groups = groups or setting.groups
        for v in range(1, setting.vertex_count + 1):
            if v > setting.inv(v):
                if v in components:
                    raise ValueError(f"vertex {v} is a derived partner; give a matrix for {setting.inv(v)} instead")
                continue
            if v not in components:
                raise ShapeError(f"group element is missing vertex {v}")
            g = components[v]
            if g.shape != (setting.dim(v), setting.dim(v)):
                raise ShapeError(f"component at vertex {v} needs size {setting.dim(v)}")
            if check and not in_group(groups[v - 1], g):
                raise ValueError(f"component at vertex {v} is not in {groups[v - 1]}({setting.dim(v)})")
            self.components[v] = g
        self._full = {}
        self._inv = {}

    def __getitem__(self, v):
        hit = self._full.get(v)
        if hit is None:
            w = self.setting.inv(v)
            hit = self.components[v] if v <= w else self.components[w].inverse().T
            self._full[v] = hit
        return hit

    def inverse_at(self, v):
        hit = self._inv.get(v)
        if hit is None:
            w = self.setting.inv(v)
            # g_{i(v)}^{-1} = g_v^T, so partner inverses need no elimination
            hit = self.components[v].inverse() if v <= w else self.components[w].T
            self._inv[v] = hit
        return hit

    def det(self, v):
        return self[v].det()

    def __mul__(self, other):
        if other.setting != self.setting:
            raise ValueError("group elements of different settings")
        return GroupElement(self.setting, {v: self.components[v] * other.components[v] for v in self.components},
                            check=False)

    @classmethod
    def identity(cls, setting, field=QQ):
        setting = base_setting(setting)
        return cls(setting, {v: Matrix.identity(setting.dim(v), field)
                             for v in range(1, setting.vertex_count + 1) if v <= setting.inv(v)}, check=False)


def act(g: GroupElement, rep: Representation) -> Representation:
    """(g.h)_alpha = g_head h_alpha g_tail^{-1}."""
    s = rep.setting
    out = {}
    for a in s.quiver.arrows:
        out[a.id] = g[a.head] * rep[a.id] * g.inverse_at(a.tail)
    return Representation(s, out, rep.field, check=False)


def _random_matrix(rng, nrows, ncols, field, bound):
    return Matrix([[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)], field)


def sample_form_matrix(form, nrows, ncols, rng, field=QQ, bound=3):
    a = _random_matrix(rng, nrows, ncols, field, bound)
    if form == "M":
        return a
    if form == "S+":
        return a + a.T
    if form == "S-":
        return a - a.T
    # AJ symmetric (skew) iff A = -S J with S symmetric (skew), since J^{-1} = -J
    s = a + a.T if form == "L+" else a - a.T
    return -(s * Matrix.J(nrows, field))


def sample_representation(s: MixedQuiverSetting, rng, field=QQ, bound=3) -> Representation:
    s = base_setting(s)
    mats = {}
    for a in s.quiver.arrows:
        mats[a.id] = sample_form_matrix(a.form, s.dim(a.head), s.dim(a.tail), rng, field, bound)
    return Representation(s, mats, field)


class SamplingError(RuntimeError):
    pass


def _cayley(m: Matrix):
    e = Matrix.identity(m.nrows, m.field)
    return (e - m) * (e + m).inverse()


def sample_group_matrix(group, n, rng, field=QQ, bound=2, budget=64):
    e = Matrix.identity(n, field)
    for _ in range(budget):
        if group == "GL":
            g = _random_matrix(rng, n, n, field, bound)
            if g.det():
                return g
            continue
        if group == "SL":
            g = e
            for _ in range(2 * n + 1):
                i, j = rng.randrange(n), rng.randrange(n)
                if i == j:
                    continue
                rows = [list(r) for r in e.rows]
                rows[i][j] = field(rng.choice([k for k in range(-bound, bound + 1) if k]))
                g = g * Matrix(rows, field)
            return g
        if group in ("O", "SO"):
            a = _random_matrix(rng, n, n, field, bound)
            try:
                g = _cayley(a - a.T)
            except ZeroDivisionError:
                continue
            if group == "O" and rng.random() < 0.5:
                g = Matrix.diagonal([-1] + [1] * (n - 1), field) * g
            return g
        if group == "Sp":
            a = _random_matrix(rng, n, n, field, bound)
            hamiltonian = Matrix.J(n, field) * (a + a.T)
            try:
                g = _cayley(hamiltonian)
            except ZeroDivisionError:
                continue
            if rng.random() < 0.5:
                g = g * Matrix.J(n, field)
            return g
        raise SettingError(f"unknown group {group!r}")
    raise SamplingError(f"no {group}({n}) sample after {budget} attempts")


def sample_group_element(s: MixedQuiverSetting, rng, field=QQ, relax_special=False) -> GroupElement:
    """Random element of G(n, g, i); with relax_special, SL is widened to GL and SO to O."""
    s = base_setting(s)
    widen = {"SL": "GL", "SO": "O"} if relax_special else {}
    groups = tuple(widen.get(g, g) for g in s.groups)
    comps = {}
    for v in range(1, s.vertex_count + 1):
        if v <= s.inv(v):
            comps[v] = sample_group_matrix(groups[v - 1], s.dim(v), rng, field)
    return GroupElement(s, comps, groups=groups)
