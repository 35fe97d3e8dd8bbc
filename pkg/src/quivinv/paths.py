"""Paths, closed paths and their canonical forms.

A word is a tuple of arrow ids of an ambient quiver; a formal transpose of
arrow ``x`` is the arrow ``x^T``.  Letters compare by their position in the
ambient quiver's arrow list, so ``order`` maps letter -> rank.  Without an
explicit order, letters compare as (base id, transposed?).
"""

from __future__ import annotations

from .matrix import Matrix
from .quiver import Arrow, Quiver, base_letter, is_transposed, phi_D_value, transpose_letter


def default_key(letter):
    return (base_letter(letter), is_transposed(letter))


def word_key(word, order=None):
    if order is None:
        return tuple(default_key(x) for x in word)
    return tuple(order[x] for x in word)


def as_word(w):
    if isinstance(w, str):
        raise TypeError("a word is a sequence of letters, not a string")
    w = tuple(w)
    if not w:
        raise ValueError("empty words are not paths")
    return w


def is_path(q: Quiver, word) -> bool:
    word = as_word(word)
    try:
        arrows = [q.arrow(x) for x in word]
    except KeyError:
        return False
    return all(arrows[k].tail == arrows[k + 1].head for k in range(len(arrows) - 1))


def head(q: Quiver, word):
    return q.arrow(word[0]).head


def tail(q: Quiver, word):
    return q.arrow(word[-1]).tail


def is_closed(q: Quiver, word) -> bool:
    return is_path(q, word) and head(q, word) == tail(q, word)


def enumerate_paths(q: Quiver, max_len: int, start=None, end=None):
    """All paths of length 1..max_len in lexicographic DFS order.

    ``start`` restricts the head vertex of the path, ``end`` its tail.
    """
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    out = []
    heads = [start] if start is not None else range(1, q.vertex_count + 1)
    for v in heads:
        stack = []

        def dfs(vertex):
            for a in q.out_of(vertex):
                stack.append(a.id)
                if end is None or a.tail == end:
                    out.append(tuple(stack))
                if len(stack) < max_len:
                    dfs(a.tail)
                stack.pop()

        dfs(v)
    return out


def enumerate_closed_paths(q: Quiver, max_len: int, at=None):
    """Closed paths of length <= max_len (incident to ``at`` when given), each once."""
    if max_len < 1:
        raise ValueError("max_len must be at least 1")
    vertices = [at] if at is not None else range(1, q.vertex_count + 1)
    out = []
    for v in vertices:
        out.extend(enumerate_paths(q, max_len, start=v, end=v))
    return out


def count_closed_paths(q: Quiver, length: int, at: int) -> int:
    """(A^L)_{vv} for the arrow-count adjacency matrix; the counting oracle for enumeration."""
    a = Matrix(q.adjacency())
    return int((a ** length)[at - 1, at - 1])


def smallest_period(word) -> int:
    word = tuple(word)
    n = len(word)
    for p in range(1, n + 1):
        if n % p == 0 and word == word[:p] * (n // p):
            return p
    return n


def is_primitive(word) -> bool:
    word = as_word(word)
    return smallest_period(word) == len(word)


def primitive_root(word):
    """(root, l) with word == root^l and root primitive."""
    word = as_word(word)
    p = smallest_period(word)
    return word[:p], len(word) // p


def rotations(word):
    word = tuple(word)
    return [word[k:] + word[:k] for k in range(len(word))]


def canonical_cyclic(word, order=None):
    """Lexicographically least rotation."""
    word = as_word(word)
    return min(rotations(word), key=lambda w: word_key(w, order))


def transpose_word(word):
    """(a_1 ... a_p)^T = a_p^T ... a_1^T."""
    return tuple(transpose_letter(x) for x in reversed(tuple(word)))


def canonical_cyclic_transpose(word, order=None):
    """Least word among the rotations of w and of w^T."""
    word = as_word(word)
    if order is not None:
        for x in word:
            if transpose_letter(x) not in order:
                raise ValueError(f"letter {x!r} has no transpose in the alphabet")
    a = canonical_cyclic(word, order)
    b = canonical_cyclic(transpose_word(word), order)
    return min(a, b, key=lambda w: word_key(w, order))


def cyclic_class_size(word) -> int:
    return len(set(rotations(word)))


def path_value(rep, word) -> Matrix:
    """Product of the substituted matrices of the letters, left to right."""
    word = as_word(word)
    acc = phi_D_value(word[0], rep)
    for x in word[1:]:
        m = phi_D_value(x, rep)
        if acc.ncols != m.nrows:
            raise ValueError(f"word {list(word)} is not composable at letter {x!r}")
        acc = acc * m
    return acc


def sigma_quiver() -> Quiver:
    """The six-arrow quiver behind sigma_{t,r}.

    X is a loop at 1 and X^T a loop at 2; Y, Y^T go from 2 to 1 and Z, Z^T from 1 to 2.
    """
    return Quiver(2, [
        Arrow("X", 1, 1), Arrow("X^T", 2, 2),
        Arrow("Y", 1, 2), Arrow("Y^T", 1, 2),
        Arrow("Z", 2, 1), Arrow("Z^T", 2, 1),
    ])


SIGMA_LETTERS = ("X", "X^T", "Y", "Y^T", "Z", "Z^T")
SIGMA_ORDER = {x: k for k, x in enumerate(SIGMA_LETTERS)}


def multidegree(word):
    """(deg_X + deg_X^T, deg_Y + deg_Y^T, deg_Z + deg_Z^T)."""
    deg = [0, 0, 0]
    for x in as_word(word):
        if x not in SIGMA_ORDER:
            raise ValueError(f"letter {x!r} is not in the sigma_(t,r) alphabet")
        deg["XYZ".index(base_letter(x))] += 1
    return tuple(deg)


def degree(word, letter):
    return sum(1 for x in word if x == letter)
