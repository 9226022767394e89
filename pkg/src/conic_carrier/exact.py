"""Exact rational scalars, vectors and covectors.

Scalars are :class:`fractions.Fraction`, which is always stored reduced with a
positive denominator, so equality and hashing are structural. Vectors and
covectors are plain tuples of fractions.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence, Tuple, Union

Rational = Fraction
QVector = Tuple[Fraction, ...]
Covector = Tuple[Fraction, ...]
Sign = int
SignProfile = Tuple[int, ...]

RationalLike = Union[Fraction, int, str]


class DimensionError(ValueError):
    """Raised when vectors of different dimension are combined."""


def to_rational(value: RationalLike) -> Fraction:
    """Convert an int, Fraction or ``"p/q"`` string to a Fraction.

    Floats are refused: they would silently import rounding error.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    num, sep, den = text.partition("/")
    try:
        if sep:
            if int(den) == 0:
                raise ValueError
            return Fraction(int(num), int(den))
        return Fraction(int(num))
    except ValueError:
        raise ValueError(f"malformed rational {text!r}; expected 'p' or 'p/q'") from None


def render_rational(q: Fraction) -> str:
    return str(q)


def vector(entries: Iterable[RationalLike]) -> QVector:
    return tuple(to_rational(e) for e in entries)


covector = vector


def zero(d: int) -> QVector:
    return (Fraction(0),) * d


def _check_dims(a: Sequence, b: Sequence) -> None:
    if len(a) != len(b):
        raise DimensionError(f"dimension mismatch: {len(a)} vs {len(b)}")


def dot(r: Sequence[Fraction], x: Sequence[Fraction]) -> Fraction:
    _check_dims(r, x)
    return sum((ri * xi for ri, xi in zip(r, x)), Fraction(0))


def add(x: Sequence[Fraction], y: Sequence[Fraction]) -> QVector:
    _check_dims(x, y)
    return tuple(a + b for a, b in zip(x, y))


def sub(x: Sequence[Fraction], y: Sequence[Fraction]) -> QVector:
    _check_dims(x, y)
    return tuple(a - b for a, b in zip(x, y))


def scale(c: RationalLike, x: Sequence[Fraction]) -> QVector:
    c = to_rational(c)
    return tuple(c * a for a in x)


def sign(q: Fraction | int) -> Sign:
    return (q > 0) - (q < 0)


def is_zero(x: Sequence[Fraction]) -> bool:
    return all(e == 0 for e in x)


def normalize_primitive(r: Sequence[RationalLike]) -> Covector:
    """Return the positive rescaling of ``r`` with coprime integer entries."""
    r = vector(r)
    if is_zero(r):
        raise ValueError("cannot normalize the zero covector")
    den = lcm(*(e.denominator for e in r))
    ints = [int(e * den) for e in r]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(Fraction(v // g) for v in ints)


def integer_entries(r: Sequence[Fraction]) -> Tuple[int, ...]:
    return tuple(int(e) for e in r)


def row_reduce(rows: Sequence[Sequence[Fraction]], ncols: int) -> Tuple[list, list]:
    """Reduced row echelon form by exact Gauss-Jordan elimination.

    Returns ``(rref_rows, pivot_columns)``; zero rows are dropped.
    """
    m = [list(vector(row)) for row in rows]
    for row in m:
        if len(row) != ncols:
            raise DimensionError(f"row of length {len(row)} in a {ncols}-column matrix")
    pivots: list = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: Sequence[Sequence[Fraction]], ncols: int) -> int:
    return len(row_reduce(rows, ncols)[1])


def kernel_basis(rows: Sequence[Sequence[RationalLike]], d: int) -> list:
    """Basis of ``{x : r(x) = 0 for every row r}`` in ``Q^d``.

    One basis vector per free column of the reduced echelon form, so the
    count is ``d - rank``. An empty list means the kernel is ``{0}``.
    """
    rref, pivots = row_reduce([vector(r) for r in rows], d)
    free = [c for c in range(d) if c not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * d
        x[f] = Fraction(1)
        for row, pc in zip(rref, pivots):
            x[pc] = -row[f]
        basis.append(tuple(x))
    return basis


def span_basis(vectors: Sequence[Sequence[Fraction]], d: int) -> list:
    """Echelon basis of the span of ``vectors`` (rows of the RREF)."""
    rref, _ = row_reduce(vectors, d)
    return [tuple(row) for row in rref]


def render_vector(x: Sequence[Fraction]) -> str:
    return "(" + ",".join(str(e) for e in x) + ")"


def json_entry(q: Fraction) -> int | str:
    """JSON form of a rational: a bare integer when possible, else ``"p/q"``."""
    return int(q) if q.denominator == 1 else str(q)


def json_vector(x: Sequence[Fraction]) -> list:
    return [json_entry(e) for e in x]
