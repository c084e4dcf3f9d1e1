"""Conic bundles over P^1 given by symmetric 3x3 matrices of binary forms.

The fiber over ``(s:t)`` is the plane conic ``x^T M(s,t) x = 0``.  Entry
``(i, j)`` is a binary form of degree ``(D_i + D_j) / 2`` where ``D_i`` is
the degree of the diagonal entry ``i``; the uniform case has all ``D_i``
equal.  Roots on P^1(R) are reported in the affine coordinate ``u = s/t``,
with the point ``(1:0)`` handled in the chart ``v = t/s``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InputError
from .exactnum import (
    IsolatingInterval,
    UniPoly,
    as_fraction,
    isolate_real_roots,
    poly_gcd,
    separate,
    sign_at_root,
    signature,
    squarefree_decomposition,
    squarefree_part,
    sturm_count,
    vanishes_at_root,
)


@dataclass(frozen=True)
class BinaryForm:
    """Homogeneous form ``sum c_i s^(d-i) t^i``."""

    degree: int
    coeffs: tuple[Fraction, ...]

    def __init__(self, degree: int, coeffs: Iterable):
        cs = tuple(as_fraction(c) for c in coeffs)
        if degree < 0 or len(cs) != degree + 1:
            raise InputError(f"binary form of degree {degree} needs {degree + 1} coefficients")
        object.__setattr__(self, "degree", degree)
        object.__setattr__(self, "coeffs", cs)

    @classmethod
    def zero(cls, degree: int) -> BinaryForm:
        return cls(degree, [0] * (degree + 1))

    @classmethod
    def s(cls) -> BinaryForm:
        return cls(1, [1, 0])

    @classmethod
    def t(cls) -> BinaryForm:
        return cls(1, [0, 1])

    @classmethod
    def constant(cls, c) -> BinaryForm:
        return cls(0, [c])

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: BinaryForm) -> BinaryForm:
        if self.degree != other.degree:
            raise InputError("adding binary forms of different degrees")
        return BinaryForm(self.degree, [a + b for a, b in zip(self.coeffs, other.coeffs)])

    def __neg__(self) -> BinaryForm:
        return BinaryForm(self.degree, [-a for a in self.coeffs])

    def __sub__(self, other: BinaryForm) -> BinaryForm:
        return self + (-other)

    def __mul__(self, other) -> BinaryForm:
        if not isinstance(other, BinaryForm):
            c = as_fraction(other)
            return BinaryForm(self.degree, [c * a for a in self.coeffs])
        out = [Fraction(0)] * (self.degree + other.degree + 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return BinaryForm(self.degree + other.degree, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> BinaryForm:
        out = BinaryForm.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __call__(self, s, t) -> Fraction:
        d = self.degree
        return sum(c * Fraction(s) ** (d - i) * Fraction(t) ** i for i, c in enumerate(self.coeffs))

    def affine(self) -> UniPoly:
        """Polynomial in ``u = s/t`` (chart ``t = 1``)."""
        return UniPoly(reversed(self.coeffs))

    def at_infinity(self) -> UniPoly:
        """Polynomial in ``v = t/s`` (chart ``s = 1``)."""
        return UniPoly(self.coeffs)

    def multiplicity_at_infinity(self) -> int:
        """Order of vanishing at ``(1:0)``."""
        if self.is_zero():
            raise InputError("zero form")
        return next(i for i, c in enumerate(self.coeffs) if c != 0)

    def substitute(self, a, b, c, d) -> BinaryForm:
        """Return ``F(a s + b t, c s + d t)``."""
        ls = BinaryForm(1, [a, b])
        lt = BinaryForm(1, [c, d])
        out = BinaryForm.zero(self.degree)
        for i, coef in enumerate(self.coeffs):
            if coef:
                out = out + (ls ** (self.degree - i)) * (lt ** i) * coef
        return out

    def negate_t(self) -> BinaryForm:
        return BinaryForm(self.degree, [c if i % 2 == 0 else -c for i, c in enumerate(self.coeffs)])

    def to_json(self) -> list[str]:
        return [str(c) for c in self.coeffs]


class BaseInvolution(enum.Enum):
    NONE = "none"
    NEGATE_T = "negate_t"


class FiberInvolution(enum.Enum):
    NONE = "none"
    NEGATE_X2 = "negate_x2"


class FiberType(enum.Enum):
    POINT = "PointType"
    LINE_PAIR = "LinePairType"
    NON_REAL_BASE = "NonRealBase"
    UNDEFINED = "Undefined"


@dataclass(frozen=True)
class QuadricPencilSurface:
    mat: tuple[tuple[BinaryForm, ...], ...]
    base_involution: BaseInvolution = BaseInvolution.NONE
    fiber_involution: FiberInvolution = FiberInvolution.NONE

    def __post_init__(self):
        m = self.mat
        if len(m) != 3 or any(len(r) != 3 for r in m):
            raise InputError("pencil matrix must be 3x3")
        diag = [m[i][i].degree for i in range(3)]
        for i in range(3):
            for j in range(3):
                if m[i][j] != m[j][i]:
                    raise InputError("pencil matrix is not symmetric")
                if (diag[i] + diag[j]) % 2 or m[i][j].degree != (diag[i] + diag[j]) // 2:
                    raise InputError(f"entry ({i},{j}) has inconsistent degree")
        if self.base_involution is BaseInvolution.NEGATE_T:
            flipped = [[e.negate_t() for e in r] for r in m]
            neg = [[-e for e in r] for r in m]
            if flipped != [list(r) for r in m] and flipped != neg:
                raise InputError("matrix is not invariant under (s:t) -> (s:-t)")
        if self.fiber_involution is FiberInvolution.NEGATE_X2:
            if not (m[0][2].is_zero() and m[1][2].is_zero()):
                raise InputError("x2 -> -x2 needs vanishing (0,2) and (1,2) entries")

    @classmethod
    def from_upper(cls, entries: Sequence[BinaryForm], **kw) -> QuadricPencilSurface:
        """Build from the six upper-triangular entries m00, m01, m02, m11, m12, m22."""
        if len(entries) != 6:
            raise InputError("need six upper-triangular entries")
        m00, m01, m02, m11, m12, m22 = entries
        return cls(((m00, m01, m02), (m01, m11, m12), (m02, m12, m22)), **kw)

    @classmethod
    def diagonal(cls, d0: BinaryForm, d1: BinaryForm, d2: BinaryForm, **kw) -> QuadricPencilSurface:
        z01 = BinaryForm.zero((d0.degree + d1.degree) // 2)
        z02 = BinaryForm.zero((d0.degree + d2.degree) // 2)
        z12 = BinaryForm.zero((d1.degree + d2.degree) // 2)
        return cls.from_upper([d0, z01, z02, d1, z12, d2], **kw)

    @property
    def diagonal_degrees(self) -> tuple[int, int, int]:
        return tuple(self.mat[i][i].degree for i in range(3))

    def upper(self) -> list[BinaryForm]:
        m = self.mat
        return [m[0][0], m[0][1], m[0][2], m[1][1], m[1][2], m[2][2]]

    def at(self, s, t) -> list[list[Fraction]]:
        return [[e(s, t) for e in row] for row in self.mat]

    def at_u(self, u) -> list[list[Fraction]]:
        return self.at(u, 1)

    def at_infinity_point(self) -> list[list[Fraction]]:
        return self.at(1, 0)

    def substitute(self, a, b, c, d) -> QuadricPencilSurface:
        return QuadricPencilSurface(
            tuple(tuple(e.substitute(a, b, c, d) for e in row) for row in self.mat),
            BaseInvolution.NONE,
            FiberInvolution.NONE,
        )

    def scaled(self, c) -> QuadricPencilSurface:
        return QuadricPencilSurface(
            tuple(tuple(e * c for e in row) for row in self.mat),
            self.base_involution,
            self.fiber_involution,
        )

    def chart(self, at_infinity: bool = False) -> list[list[UniPoly]]:
        return [[e.at_infinity() if at_infinity else e.affine() for e in row] for row in self.mat]


def _det3(m):
    return (
        m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
    )


def _minors2(m) -> list:
    rows = [(0, 1), (0, 2), (1, 2)]
    return [m[a][c] * m[b][d] - m[a][d] * m[b][c] for a, b in rows for c, d in rows]


def _principal_minors_sum(m):
    return (
        m[0][0] * m[1][1] - m[0][1] * m[1][0]
        + m[0][0] * m[2][2] - m[0][2] * m[2][0]
        + m[1][1] * m[2][2] - m[1][2] * m[2][1]
    )


def discriminant(surface: QuadricPencilSurface) -> BinaryForm:
    """Determinant of the matrix of binary forms."""
    d = _det3(surface.mat)
    if d.is_zero():
        raise InputError("degenerate pencil")
    return d


def _rank_at(m_rat: Sequence[Sequence[Fraction]]) -> int:
    p, q, _ = signature(m_rat)
    return p + q


@dataclass(frozen=True)
class FiberLocation:
    """Where a singular fiber sits: a real affine root, ``(1:0)``, or a conjugate pair."""

    kind: str  # "real" | "infinity" | "conjugate_pair"
    interval: Optional[IsolatingInterval] = None
    index: Optional[int] = None
    purely_imaginary: Optional[bool] = None

    def to_json(self):
        if self.kind == "real":
            return {"real": self.interval.to_json()}
        if self.kind == "infinity":
            return {"real": "infinity"}
        out = {"conjugate_pair": self.index}
        if self.purely_imaginary is not None:
            out["purely_imaginary"] = self.purely_imaginary
        return out


@dataclass(frozen=True)
class SingularFiber:
    location: FiberLocation
    multiplicity: int
    fiber_rank: int
    real_type: FiberType
    swapped_by_fiber_involution: Optional[bool] = None

    @property
    def is_real(self) -> bool:
        return self.location.kind != "conjugate_pair"

    def to_json(self) -> dict:
        out = {
            "location": self.location.to_json(),
            "multiplicity": self.multiplicity,
            "fiber_rank": self.fiber_rank,
            "real_type": self.real_type.value,
        }
        if self.swapped_by_fiber_involution is not None:
            out["swapped_by_fiber_involution"] = self.swapped_by_fiber_involution
        return out


class _Chart:
    """Polynomial data of the surface in one affine chart of the base."""

    def __init__(self, surface: QuadricPencilSurface, at_infinity: bool):
        m = surface.chart(at_infinity)
        self.m = m
        self.det = _det3(m)
        self.minors = [q for q in _minors2(m) if q]
        self.entries = [e for row in m for e in row if e]
        self.e2 = _principal_minors_sum(m)
        self.top_det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
        self.m22 = m[2][2]

    def rank_at(self, p: UniPoly, iv: IsolatingInterval) -> int:
        if all(vanishes_at_root(p, iv, q) for q in self.entries):
            return 0
        if all(vanishes_at_root(p, iv, q) for q in self.minors):
            return 1
        return 2


def _classify_real(surface, chart: _Chart, p: UniPoly, iv: IsolatingInterval):
    rank = chart.rank_at(p, iv)
    swapped = None
    if rank < 2:
        return rank, FiberType.UNDEFINED, swapped
    rtype = FiberType.POINT if sign_at_root(p, iv, chart.e2) > 0 else FiberType.LINE_PAIR
    if surface.fiber_involution is FiberInvolution.NEGATE_X2 and rtype is FiberType.LINE_PAIR:
        swapped = (not vanishes_at_root(p, iv, chart.m22)) and vanishes_at_root(p, iv, chart.top_det)
    return rank, rtype, swapped


def _nonreal_pairs(q: UniPoly) -> int:
    return (q.degree - sturm_count(q)) // 2


def _imaginary_pairs(q: UniPoly) -> int:
    """Pairs of roots ``+-iy`` (y > 0) of a polynomial whose roots are symmetric under negation."""
    cs = q.coeffs
    if q.degree <= 0:
        return 0
    # q(u) = u^e P(u^2) with e in {0, 1}
    even = UniPoly(cs[1::2] if cs[0] == 0 else cs[0::2])
    if even.degree <= 0:
        return 0
    sq = squarefree_part(even)
    return sturm_count(sq, hi=Fraction(0)) - (1 if sq(0) == 0 else 0)


def singular_fibers(surface: QuadricPencilSurface) -> list[SingularFiber]:
    """All singular fibers: real ones sorted by position, then ``(1:0)``, then conjugate pairs."""
    disc = discriminant(surface)
    aff = _Chart(surface, at_infinity=False)
    out: list[SingularFiber] = []
    du = disc.affine()
    if du.degree > 0:
        sqf = squarefree_part(du)
        for iv, mult in isolate_real_roots(du):
            rank, rtype, swapped = _classify_real(surface, aff, sqf, iv)
            out.append(SingularFiber(FiberLocation("real", iv), mult, rank, rtype, swapped))
    mult_inf = disc.multiplicity_at_infinity()
    if mult_inf:
        inf = _Chart(surface, at_infinity=True)
        iv0 = IsolatingInterval(Fraction(-1, 2), Fraction(0))
        v = UniPoly.x()
        rank, rtype, swapped = _classify_real(surface, inf, v, iv0)
        out.append(SingularFiber(FiberLocation("infinity"), mult_inf, rank, rtype, swapped))
    if du.degree > 0:
        index = 0
        negate_t = surface.base_involution is BaseInvolution.NEGATE_T
        for q, k in squarefree_decomposition(du):
            pairs = _nonreal_pairs(q)
            if not pairs:
                continue
            low_rank = poly_gcd(q, _gcd_all(aff.minors))
            zero_rank = poly_gcd(q, _gcd_all(aff.entries))
            n_rank_le1 = _nonreal_pairs(low_rank) if low_rank.degree > 0 else 0
            n_rank0 = _nonreal_pairs(zero_rank) if zero_rank.degree > 0 else 0
            n_imag = _imaginary_pairs(q) if negate_t else None
            for j in range(pairs):
                rank = 0 if j < n_rank0 else (1 if j < n_rank_le1 else 2)
                imag = (j < n_imag) if negate_t else None
                out.append(SingularFiber(
                    FiberLocation("conjugate_pair", index=index, purely_imaginary=imag),
                    k, rank, FiberType.NON_REAL_BASE))
                index += 1
    return out


def _gcd_all(polys: Sequence[UniPoly]) -> UniPoly:
    g = UniPoly()
    for q in polys:
        g = poly_gcd(g, q) if g else q.monic()
    return g if g else UniPoly()


@dataclass(frozen=True)
class SmoothnessReport:
    squarefree_discriminant: bool
    all_fibers_rank2: bool
    note: str = "necessary conditions only; smoothness of the total space is not certified"

    @property
    def ok(self) -> bool:
        return self.squarefree_discriminant and self.all_fibers_rank2

    def to_json(self) -> dict:
        return {
            "squarefree_discriminant": self.squarefree_discriminant,
            "all_fibers_rank2": self.all_fibers_rank2,
            "note": self.note,
        }


def smoothness_necessary(surface: QuadricPencilSurface) -> SmoothnessReport:
    """Necessary conditions for a smooth total space: reduced discriminant, no rank <= 1 fiber."""
    disc = discriminant(surface)
    du = disc.affine()
    mult_inf = disc.multiplicity_at_infinity()
    sqfree = mult_inf <= 1 and (du.degree <= 0 or all(k == 1 for _, k in squarefree_decomposition(du)))
    rank2 = True
    if du.degree > 0:
        g = poly_gcd(squarefree_part(du), _gcd_all(_Chart(surface, False).minors))
        rank2 = g.degree <= 0
    if rank2 and mult_inf:
        rank2 = _rank_at(surface.at_infinity_point()) == 2
    return SmoothnessReport(sqfree, rank2)


# ---------------------------------------------------------------------------
# Real topology
# ---------------------------------------------------------------------------

INFINITY = "infinity"
ArcEndpoint = Union[IsolatingInterval, str]


@dataclass(frozen=True)
class Arc:
    """Closed arc of P^1(R) over which fibers have real points.

    ``start`` is None for the whole circle; ``start == end`` marks an
    isolated point component.
    """

    start: Optional[ArcEndpoint]
    end: Optional[ArcEndpoint]

    def to_json(self):
        def ep(x):
            if x is None:
                return None
            return x if isinstance(x, str) else x.to_json()

        if self.start is None:
            return "whole circle"
        return [ep(self.start), ep(self.end)]


@dataclass(frozen=True)
class RealTopologyReport:
    arcs: tuple[Arc, ...]
    components: int
    empty_locus: bool

    def to_json(self) -> dict:
        return {
            "arcs": [a.to_json() for a in self.arcs],
            "components": self.components,
            "empty_locus": self.empty_locus,
        }


def _nonempty(m_rat) -> bool:
    p, q, _ = signature(m_rat)
    return p > 0 and q > 0


def _real_roots(surface: QuadricPencilSurface):
    """Real singular fibers in circle order with separated intervals."""
    fibers = [f for f in singular_fibers(surface) if f.is_real]
    finite = [f for f in fibers if f.location.kind == "real"]
    disc = discriminant(surface).affine()
    if finite:
        sqf = squarefree_part(disc)
        ivs = separate(sqf, [f.location.interval for f in finite])
        finite = [
            SingularFiber(FiberLocation("real", iv), f.multiplicity, f.fiber_rank, f.real_type,
                          f.swapped_by_fiber_involution)
            for f, iv in zip(finite, ivs)
        ]
    return finite + [f for f in fibers if f.location.kind == "infinity"]


def real_components(surface: QuadricPencilSurface) -> RealTopologyReport:
    """Connected components of the real locus by the arc/gluing rule.

    Between consecutive real singular fibers the fibers are either all empty
    or all nonempty (one sample point decides).  Nonempty arcs are glued
    across a singular fiber when both sides are nonempty; a point-type fiber
    with empty fibers on both sides is an isolated point of the real locus.
    """
    roots = _real_roots(surface)
    for f in roots:
        if f.multiplicity > 1 or f.fiber_rank < 2:
            raise InputError("topology requires smooth model")
    k = len(roots)
    if k == 0:
        if _nonempty(surface.at_u(0)):
            return RealTopologyReport((Arc(None, None),), 1, False)
        return RealTopologyReport((), 0, True)

    def endpoint(f):
        return INFINITY if f.location.kind == "infinity" else f.location.interval

    # arc i runs from roots[i] to roots[(i + 1) % k]
    samples = []
    for i in range(k):
        a, b = roots[i], roots[(i + 1) % k]
        if k == 1:
            samples.append(surface.at_u(0) if a.location.kind == "infinity" else surface.at_infinity_point())
        elif b.location.kind == "infinity":
            samples.append(surface.at_u(a.location.interval.hi + 1))
        elif a.location.kind == "infinity":
            samples.append(surface.at_u(b.location.interval.lo - 1))
        elif i == k - 1:
            samples.append(surface.at_infinity_point())
        else:
            samples.append(surface.at_u((a.location.interval.hi + b.location.interval.lo) / 2))
    full = [_nonempty(m) for m in samples]

    parent = list(range(k))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    isolated = []
    for i in range(k):
        left, right = (i - 1) % k, i
        if full[left] and full[right]:
            parent[find(left)] = find(right)
        elif not full[left] and not full[right] and roots[i].real_type is FiberType.POINT:
            isolated.append(i)

    arcs: list[Arc] = []
    if all(full) and len({find(i) for i in range(k)}) == 1 and all(
        full[(i - 1) % k] and full[i] for i in range(k)
    ):
        arcs.append(Arc(None, None))
    else:
        # walk each maximal run of glued nonempty arcs
        for i in range(k):
            if not full[i] or (full[(i - 1) % k] and find((i - 1) % k) == find(i)):
                continue
            j = i
            while full[(j + 1) % k] and find((j + 1) % k) == find(i) and (j + 1) % k != i:
                j = (j + 1) % k
            arcs.append(Arc(endpoint(roots[i]), endpoint(roots[(j + 1) % k])))
    for i in isolated:
        arcs.append(Arc(endpoint(roots[i]), endpoint(roots[i])))
    components = len(arcs)
    return RealTopologyReport(tuple(arcs), components, components == 0)


# ---------------------------------------------------------------------------
# Fiber taxonomy
# ---------------------------------------------------------------------------


def fiber_type_taxonomy(surface: QuadricPencilSurface) -> list[tuple[SingularFiber, str]]:
    """Tag singular fibers with the witness types 2a/2b (base involution) or 3a/3b (fiber involution)."""
    base = surface.base_involution is BaseInvolution.NEGATE_T
    fib = surface.fiber_involution is FiberInvolution.NEGATE_X2
    if base == fib:
        raise InputError("exactly one of base_involution / fiber_involution must be set")
    out = []
    for f in singular_fibers(surface):
        tag = "n/a"
        if base:
            if f.is_real and f.real_type is FiberType.POINT:
                tag = "2a"
            elif not f.is_real and f.location.purely_imaginary:
                tag = "2b"
        else:
            if f.is_real and f.real_type is FiberType.POINT:
                tag = "3a"
            elif f.is_real and f.real_type is FiberType.LINE_PAIR and f.swapped_by_fiber_involution:
                tag = "3b"
        out.append((f, tag))
    return out


# ---------------------------------------------------------------------------
# Fixture constructors
# ---------------------------------------------------------------------------


def _quadratic(a) -> BinaryForm:
    # s^2 - a t^2
    return BinaryForm(2, [1, 0, -as_fraction(a)])


def example_2_5(a0, a1, a2, involution: str = "negate_t") -> QuadricPencilSurface:
    """``s^2 f + t^2 g`` with ``f = x0^2 + x1^2 + x2^2`` and ``g = -sum a_i x_i^2``.

    ``involution`` selects ``(s:t) -> (s:-t)`` (``"negate_t"``) or
    ``x2 -> -x2`` (``"negate_x2"``).
    """
    a0, a1, a2 = (as_fraction(a) for a in (a0, a1, a2))
    if not a0 > a1 or len({a0, a1, a2}) != 3:
        raise InputError("need a0 > a1 and a0, a1, a2 mutually distinct")
    kw = {}
    if involution == "negate_t":
        kw["base_involution"] = BaseInvolution.NEGATE_T
    elif involution == "negate_x2":
        kw["fiber_involution"] = FiberInvolution.NEGATE_X2
    elif involution != "none":
        raise InputError(f"unknown involution {involution!r}")
    return QuadricPencilSurface.diagonal(_quadratic(a0), _quadratic(a1), _quadratic(a2), **kw)


def example_2_8(a0, a1, a2) -> QuadricPencilSurface:
    """The same surface with the fiber involution, in the regime a0 > a1 > a2 > 0."""
    a0, a1, a2 = (as_fraction(a) for a in (a0, a1, a2))
    if not a0 > a1 > a2 > 0:
        raise InputError("need a0 > a1 > a2 > 0")
    return example_2_5(a0, a1, a2, involution="negate_x2")


def linear_product(roots: Sequence, include_infinity: bool = False) -> BinaryForm:
    """Product of ``s - r t`` over ``roots`` (times ``t`` when ``include_infinity``)."""
    out = BinaryForm.constant(1)
    for r in roots:
        out = out * BinaryForm(1, [1, -as_fraction(r)])
    if include_infinity:
        out = out * BinaryForm.t()
    return out


def diagonal_bundle(p: BinaryForm) -> QuadricPencilSurface:
    """``x0^2 + x1^2 = p(s,t) x2^2``; fibers have real points exactly where p >= 0."""
    one = BinaryForm.constant(1)
    return QuadricPencilSurface.diagonal(one, one, -p)


def kowalevskaya_quotient(s0) -> QuadricPencilSurface:
    """Diagonal conic bundle with discriminant roots ``{0, 1, s0, infinity}``, all simple.

    Only the discriminant-level data of the quotient is modeled.
    """
    s0 = as_fraction(s0)
    if not s0 > 1:
        raise InputError("need s0 > 1")
    return diagonal_bundle(linear_product([0, 1, s0], include_infinity=True))
