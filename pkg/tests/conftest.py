import random
from fractions import Fraction

import pytest
import sympy

from quivinv.fields import QQ
from quivinv.matrix import Matrix


def rand_matrix(rng, nrows, ncols=None, field=QQ, bound=3):
    ncols = nrows if ncols is None else ncols
    return Matrix([[rng.randint(-bound, bound) for _ in range(ncols)] for _ in range(nrows)], field)


def rand_rational_matrix(rng, nrows, ncols=None, bound=4):
    ncols = nrows if ncols is None else ncols
    return Matrix([[_frac(rng, bound) for _ in range(ncols)] for _ in range(nrows)])


def _frac(rng, bound):
    return Fraction(rng.randint(-bound, bound), rng.randint(1, 3))


def to_sympy(m: Matrix):
    return sympy.Matrix(m.nrows, m.ncols, lambda i, j: sympy.Rational(m.rows[i][j].numerator, m.rows[i][j].denominator))


def from_sympy_scalar(x):
    x = sympy.Rational(x)
    return Fraction(int(x.p), int(x.q))


@pytest.fixture
def rng():
    return random.Random(20240611)


CRITERIA = []


def record(number, title, ok, detail=""):
    line = f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}" + (f"  ({detail})" if detail else "")
    CRITERIA.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(CRITERIA, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
