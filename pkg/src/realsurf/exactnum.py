"""Exact numeric kernel.

Everything here works over arbitrary-precision integers and rationals
(``fractions.Fraction``); there is no floating point anywhere.  The module
provides

* ``UniPoly``: dense univariate polynomials over Q,
* Sturm sequences, real root counting and real root isolation,
* ``IntMatrix`` with Smith normal form and saturated integer kernels,
* Sylvester inertia (signature) of rational symmetric matrices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence, Union

from .errors import InputError

Rational = Fraction


def as_fraction(x) -> Fraction:
    """Coerce an int, Fraction or ``"p/q"`` string to a Fraction."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        raise InputError(f"not a rational number: {x!r}")
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        try:
            return Fraction(x)
        except (ValueError, ZeroDivisionError) as exc:
            raise InputError(f"not a rational number: {x!r}") from exc
    raise InputError(f"not a rational number: {x!r}")


def sign(x) -> int:
    return (x > 0) - (x < 0)


class Infinity(enum.Enum):
    """Explicit endpoints at infinity for root counting."""

    NEG = -1
    POS = 1


Endpoint = Union[Fraction, int, Infinity]


# ---------------------------------------------------------------------------
# Polynomials
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class UniPoly:
    """Univariate polynomial over Q, coefficients in ascending degree.

    The coefficient tuple never has trailing zeros, so the zero polynomial
    is ``UniPoly(())``.
    """

    coeffs: tuple[Fraction, ...]

    def __init__(self, coeffs: Iterable = ()):
        cs = [as_fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        object.__setattr__(self, "coeffs", tuple(cs))

    @classmethod
    def constant(cls, c) -> UniPoly:
        return cls((c,))

    @classmethod
    def x(cls) -> UniPoly:
        return cls((0, 1))

    @classmethod
    def from_roots(cls, roots: Iterable, lead=1) -> UniPoly:
        p = cls.constant(lead)
        for r in roots:
            p = p * cls((-as_fraction(r), 1))
        return p

    @property
    def degree(self) -> int:
        """Degree, with ``-1`` for the zero polynomial."""
        return len(self.coeffs) - 1

    @property
    def lc(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __add__(self, other: UniPoly) -> UniPoly:
        a, b = self.coeffs, other.coeffs
        n = max(len(a), len(b))
        return UniPoly(
            (a[i] if i < len(a) else 0) + (b[i] if i < len(b) else 0) for i in range(n)
        )

    def __neg__(self) -> UniPoly:
        return UniPoly(-c for c in self.coeffs)

    def __sub__(self, other: UniPoly) -> UniPoly:
        return self + (-other)

    def __mul__(self, other) -> UniPoly:
        if not isinstance(other, UniPoly):
            c = as_fraction(other)
            return UniPoly(c * a for a in self.coeffs)
        if not self.coeffs or not other.coeffs:
            return UniPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return UniPoly(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> UniPoly:
        out = UniPoly.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __divmod__(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = other.degree
        lc = other.lc
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for k in range(len(rem) - 1, dq - 1, -1):
            c = rem[k]
            if c == 0:
                continue
            q = c / lc
            quot[k - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[k - dq + j] -= q * b
        return UniPoly(quot), UniPoly(rem[:dq] if dq > 0 else ())

    def __floordiv__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[0]

    def __mod__(self, other: UniPoly) -> UniPoly:
        return divmod(self, other)[1]

    def monic(self) -> UniPoly:
        if self.is_zero():
            return self
        return self * (1 / self.lc)

    def derivative(self) -> UniPoly:
        return UniPoly(i * c for i, c in enumerate(self.coeffs) if i > 0)

    def __call__(self, x) -> Fraction:
        acc = Fraction(0)
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def sign_at(self, x: Endpoint) -> int:
        if isinstance(x, Infinity):
            if self.is_zero():
                return 0
            s = sign(self.lc)
            if x is Infinity.NEG and self.degree % 2 == 1:
                s = -s
            return s
        return sign(self(x))

    def compose_neg(self) -> UniPoly:
        """Return p(-x)."""
        return UniPoly(c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs))

    def __repr__(self) -> str:
        if not self.coeffs:
            return "UniPoly(0)"
        terms = []
        for i, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}*x^{i}" if i else f"{c}")
        return "UniPoly(" + " + ".join(terms) + ")"


def poly_gcd(a: UniPoly, b: UniPoly) -> UniPoly:
    """Monic gcd (zero only if both inputs are zero)."""
    while b:
        a, b = b, a % b
    return a.monic()


def squarefree_part(p: UniPoly) -> UniPoly:
    if p.is_zero():
        raise InputError("zero polynomial has no squarefree part")
    if p.degree == 0:
        return UniPoly.constant(1)
    return (p // poly_gcd(p, p.derivative())).monic()


def squarefree_decomposition(p: UniPoly) -> list[tuple[UniPoly, int]]:
    """Yun's algorithm: ``p = lc * prod q_k^k`` with pairwise coprime, squarefree, monic ``q_k``.

    Only factors of positive degree are returned, as ``(q_k, k)`` pairs.
    """
    if p.is_zero():
        raise InputError("zero polynomial has no squarefree decomposition")
    if p.degree <= 0:
        return []
    out = []
    dp = p.derivative()
    a = poly_gcd(p, dp)
    b = p // a
    c = dp // a
    d = c - b.derivative()
    k = 1
    while b.degree > 0:
        g = poly_gcd(b, d)
        if g.degree > 0:
            out.append((g, k))
        b = b // g
        c = d // g
        d = c - b.derivative()
        k += 1
    return out


# ---------------------------------------------------------------------------
# Sturm sequences and real roots
# ---------------------------------------------------------------------------


def sturm_sequence(p: UniPoly) -> list[UniPoly]:
    seq = [p, p.derivative()]
    while seq[-1]:
        seq.append(-(seq[-2] % seq[-1]))
    return seq[:-1]


def _variations(seq: Sequence[UniPoly], x: Endpoint) -> int:
    signs = [s for s in (q.sign_at(x) for q in seq) if s != 0]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _lt(a: Endpoint, b: Endpoint) -> bool:
    if isinstance(a, Infinity) or isinstance(b, Infinity):
        av = a.value if isinstance(a, Infinity) else 0
        bv = b.value if isinstance(b, Infinity) else 0
        if isinstance(a, Infinity) and isinstance(b, Infinity):
            return av < bv
        if isinstance(a, Infinity):
            return a is Infinity.NEG
        return b is Infinity.POS
    return a < b


def sturm_count(p: UniPoly, lo: Endpoint = Infinity.NEG, hi: Endpoint = Infinity.POS,
                _seq: Sequence[UniPoly] | None = None) -> int:
    """Number of distinct real roots of the squarefree polynomial ``p`` in ``(lo, hi]``."""
    if p.is_zero():
        raise InputError("zero polynomial has no root count")
    if not _lt(lo, hi):
        return 0
    seq = _seq if _seq is not None else sturm_sequence(p)
    return _variations(seq, lo) - _variations(seq, hi)


@dataclass(frozen=True)
class IsolatingInterval:
    """Half-open interval ``(lo, hi]`` holding exactly one real root."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        if not self.lo < self.hi:
            raise InputError("isolating interval needs lo < hi")

    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def to_json(self) -> list[str]:
        return [str(self.lo), str(self.hi)]


def root_bound(p: UniPoly) -> Fraction:
    """Cauchy bound: every complex root has modulus < the returned value."""
    lc = abs(p.lc)
    return 1 + max((abs(c) / lc for c in p.coeffs[:-1]), default=Fraction(0))


def _isolate_squarefree(p: UniPoly) -> list[IsolatingInterval]:
    if p.degree <= 0:
        return []
    seq = sturm_sequence(p)
    b = root_bound(p)
    out = []
    stack = [(-b, b)]
    while stack:
        lo, hi = stack.pop()
        n = sturm_count(p, lo, hi, seq)
        if n == 0:
            continue
        if n == 1:
            out.append(IsolatingInterval(lo, hi))
            continue
        mid = (lo + hi) / 2
        stack.append((lo, mid))
        stack.append((mid, hi))
    out.sort(key=lambda iv: iv.lo)
    return out


def isolate_real_roots(p: UniPoly) -> list[tuple[IsolatingInterval, int]]:
    """Isolate all real roots of ``p`` and attach their multiplicities.

    Intervals are pairwise disjoint and sorted ascending.
    """
    if p.is_zero():
        raise InputError("zero polynomial has no isolated roots")
    parts = squarefree_decomposition(p)
    if not parts:
        return []
    sqf = reduce(lambda a, b: a * b, (q for q, _ in parts)).monic()
    out = []
    for iv in _isolate_squarefree(sqf):
        mult = next(k for q, k in parts if sturm_count(q, iv.lo, iv.hi) == 1)
        out.append((iv, mult))
    return out


def refine(p: UniPoly, iv: IsolatingInterval, _seq: Sequence[UniPoly] | None = None) -> IsolatingInterval:
    """Halve an isolating interval of the squarefree polynomial ``p``."""
    mid = iv.midpoint()
    if sturm_count(p, iv.lo, mid, _seq) == 1:
        return IsolatingInterval(iv.lo, mid)
    return IsolatingInterval(mid, iv.hi)


def vanishes_at_root(p: UniPoly, iv: IsolatingInterval, g: UniPoly) -> bool:
    """Whether ``g`` vanishes at the unique root of squarefree ``p`` in ``iv``."""
    if g.is_zero():
        return True
    h = poly_gcd(p, g)
    if h.degree <= 0:
        return False
    return sturm_count(h, iv.lo, iv.hi) == 1


def sign_at_root(p: UniPoly, iv: IsolatingInterval, g: UniPoly) -> int:
    """Exact sign of ``g`` at the unique root of squarefree ``p`` in ``iv``."""
    if vanishes_at_root(p, iv, g):
        return 0
    if g.degree > 0:
        gs = squarefree_part(g)
        pseq, gseq = sturm_sequence(p), sturm_sequence(gs)
        while sturm_count(gs, iv.lo, iv.hi, gseq) > 0:
            iv = refine(p, iv, pseq)
    return g.sign_at(iv.hi)


def separate(p: UniPoly, intervals: list[IsolatingInterval]) -> list[IsolatingInterval]:
    """Refine sorted isolating intervals of ``p`` until consecutive ones have a gap."""
    ivs = list(intervals)
    seq = sturm_sequence(p) if ivs else None
    changed = True
    while changed:
        changed = False
        for i in range(len(ivs) - 1):
            while not ivs[i].hi < ivs[i + 1].lo:
                ivs[i] = refine(p, ivs[i], seq)
                ivs[i + 1] = refine(p, ivs[i + 1], seq)
                changed = True
    return ivs


# ---------------------------------------------------------------------------
# Integer matrices
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class IntMatrix:
    """Immutable rectangular integer matrix stored row-major."""

    rows: tuple[tuple[int, ...], ...]

    def __init__(self, rows: Iterable[Iterable[int]]):
        rs = tuple(tuple(int(x) for x in r) for r in rows)
        if not rs or not rs[0]:
            raise InputError("matrix must have at least one row and one column")
        width = len(rs[0])
        if any(len(r) != width for r in rs):
            raise InputError("matrix is not rectangular")
        object.__setattr__(self, "rows", rs)

    @classmethod
    def identity(cls, n: int) -> IntMatrix:
        return cls([[int(i == j) for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, entries: Sequence[int]) -> IntMatrix:
        n = len(entries)
        return cls([[entries[i] if i == j else 0 for j in range(n)] for i in range(n)])

    @classmethod
    def from_columns(cls, cols: Sequence[Sequence[int]]) -> IntMatrix:
        return cls(zip(*cols))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    @property
    def nrows(self) -> int:
        return len(self.rows)

    @property
    def ncols(self) -> int:
        return len(self.rows[0])

    def __getitem__(self, ij: tuple[int, int]) -> int:
        i, j = ij
        return self.rows[i][j]

    @property
    def T(self) -> IntMatrix:
        return IntMatrix(zip(*self.rows))

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self.rows)

    def columns(self) -> list[tuple[int, ...]]:
        return [self.column(j) for j in range(self.ncols)]

    def apply(self, v: Sequence[int]) -> tuple[int, ...]:
        if len(v) != self.ncols:
            raise InputError("dimension mismatch")
        return tuple(sum(a * b for a, b in zip(r, v)) for r in self.rows)

    def __matmul__(self, other: IntMatrix) -> IntMatrix:
        if self.ncols != other.nrows:
            raise InputError("dimension mismatch")
        cols = other.columns()
        return IntMatrix(
            [[sum(a * b for a, b in zip(r, c)) for c in cols] for r in self.rows]
        )

    def __add__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix(
            [[a + b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __sub__(self, other: IntMatrix) -> IntMatrix:
        return IntMatrix(
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)]
        )

    def __neg__(self) -> IntMatrix:
        return IntMatrix([[-a for a in r] for r in self.rows])

    def is_square(self) -> bool:
        return self.nrows == self.ncols

    def trace(self) -> int:
        return sum(self.rows[i][i] for i in range(min(self.shape)))

    def det(self) -> int:
        """Determinant by fraction-free Bareiss elimination."""
        if not self.is_square():
            raise InputError("determinant of a non-square matrix")
        a = [list(r) for r in self.rows]
        n = len(a)
        s, prev = 1, 1
        for k in range(n - 1):
            if a[k][k] == 0:
                piv = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
                if piv is None:
                    return 0
                a[k], a[piv] = a[piv], a[k]
                s = -s
            for i in range(k + 1, n):
                for j in range(k + 1, n):
                    a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
            prev = a[k][k]
        return s * a[n - 1][n - 1]

    def to_lists(self) -> list[list[int]]:
        return [list(r) for r in self.rows]


def smith_normal_form(a: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return ``(U, D, V)`` with ``U @ A @ V == D`` and unimodular ``U``, ``V``.

    ``D`` is diagonal with non-negative entries ``d_1 | d_2 | ...``.
    """
    m, n = a.shape
    d = [list(r) for r in a.rows]
    u = [[int(i == j) for j in range(m)] for i in range(m)]
    v = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap_rows(i, j):
        d[i], d[j] = d[j], d[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i, j):
        for row in d:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    def add_row(src, dst, q):  # row_dst += q * row_src
        d[dst] = [x + q * y for x, y in zip(d[dst], d[src])]
        u[dst] = [x + q * y for x, y in zip(u[dst], u[src])]

    def add_col(src, dst, q):  # col_dst += q * col_src
        for row in d:
            row[dst] += q * row[src]
        for row in v:
            row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            for i in range(t, m):
                for j in range(t, n):
                    if d[i][j] and (piv is None or abs(d[i][j]) < abs(d[piv[0]][piv[1]])):
                        piv = (i, j)
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = d[t][t]
            dirty = False
            for i in range(t + 1, m):
                if d[i][t]:
                    add_row(t, i, -(d[i][t] // p))
                    dirty = dirty or d[i][t] != 0
            for j in range(t + 1, n):
                if d[t][j]:
                    add_col(t, j, -(d[t][j] // p))
                    dirty = dirty or d[t][j] != 0
            if dirty:
                continue
            bad = next(
                (i for i in range(t + 1, m) for j in range(t + 1, n) if d[i][j] % p),
                None,
            )
            if bad is None:
                break
            add_row(bad, t, 1)
        if d[t][t] < 0:
            d[t] = [-x for x in d[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(u), IntMatrix(d), IntMatrix(v)


def elementary_divisors(a: IntMatrix) -> list[int]:
    """Nonzero diagonal of the Smith normal form."""
    _, d, _ = smith_normal_form(a)
    return [d[i, i] for i in range(min(d.shape)) if d[i, i]]


def integer_kernel(a: IntMatrix) -> list[tuple[int, ...]]:
    """Basis of the saturated lattice ``{x in Z^n : A x = 0}``."""
    _, d, v = smith_normal_form(a)
    r = sum(1 for i in range(min(d.shape)) if d[i, i])
    return [v.column(j) for j in range(r, a.ncols)]


def rank(a: IntMatrix) -> int:
    return len(elementary_divisors(a))


def solve_in_basis(basis: Sequence[Sequence[int]], w: Sequence[int]) -> tuple[int, ...]:
    """Integer coordinates of ``w`` in a basis of a saturated sublattice.

    Raises ``InputError`` if ``w`` is not in the span.
    """
    b = IntMatrix.from_columns(basis)
    u, d, v = smith_normal_form(b)
    uw = u.apply(w)
    k = len(basis)
    y = []
    for i in range(k):
        di = d[i, i]
        if di == 0 or uw[i] % di:
            raise InputError("vector is not in the integral span of the basis")
        y.append(uw[i] // di)
    if any(uw[i] for i in range(k, len(uw))):
        raise InputError("vector is not in the span of the basis")
    return v.apply(y)


# ---------------------------------------------------------------------------
# Symmetric matrices
# ---------------------------------------------------------------------------


def signature(m: Sequence[Sequence]) -> tuple[int, int, int]:
    """Sylvester inertia ``(n_plus, n_minus, n_zero)`` of a rational symmetric matrix.

    Uses symmetric congruence diagonalisation.  When every remaining diagonal
    entry vanishes but an off-diagonal one does not, adding row/column ``j``
    to row/column ``i`` creates the pivot ``2 m_ij`` (the hyperbolic-plane
    step).
    """
    a = [[as_fraction(x) for x in row] for row in m]
    n = len(a)
    if any(len(row) != n for row in a):
        raise InputError("signature needs a square matrix")
    for i in range(n):
        for j in range(i + 1, n):
            if a[i][j] != a[j][i]:
                raise InputError("signature needs a symmetric matrix")
    pos = neg = 0
    k = 0
    while k < n:
        piv = next((i for i in range(k, n) if a[i][i] != 0), None)
        if piv is None:
            off = next(
                ((i, j) for i in range(k, n) for j in range(i + 1, n) if a[i][j] != 0),
                None,
            )
            if off is None:
                break
            i, j = off
            for c in range(n):
                a[i][c] += a[j][c]
            for r in range(n):
                a[r][i] += a[r][j]
            piv = i
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            for row in a:
                row[k], row[piv] = row[piv], row[k]
        p = a[k][k]
        for i in range(k + 1, n):
            q = a[i][k] / p
            if q:
                for c in range(n):
                    a[i][c] -= q * a[k][c]
                for r in range(n):
                    a[r][i] -= q * a[r][k]
        if p > 0:
            pos += 1
        else:
            neg += 1
        k += 1
    return pos, neg, n - pos - neg


def lcm(values: Iterable[int]) -> int:
    return reduce(lambda x, y: x * y // gcd(x, y), values, 1)
