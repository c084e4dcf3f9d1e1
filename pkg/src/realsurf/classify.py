"""Top-level verdicts for real geometrically rational surfaces.

* ``kollar_class``: the five-way birational classification over R.
* ``degree_two_verdict``: whether a degree-two real unirational
  parametrization exists.
* ``lemma_5_7_structure``: a minimal del Pezzo surface of degree 3..7 either
  has a contractible orbit or a conic bundle class ``E + sigma E``.
* ``catalog_classify`` / ``quotient_type``: the catalog of real plane
  involutions and the birational type of their quotients.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Optional, Union

from .conicbundle import FiberType, QuadricPencilSurface, real_components, singular_fibers, smoothness_necessary
from .eqmmp import (
    ContractibleOrbit,
    SurfacePair,
    contractible_orbits,
    is_minimal_pair,
    surface_minimal_model,
)
from .errors import InconsistentError, InputError
from .involutions import invariant_sublattice
from .picard import DivisorClass


# ---------------------------------------------------------------------------
# Kollar classes
# ---------------------------------------------------------------------------


class KollarVariant(enum.Enum):
    C1 = "C1_QuadricTimesP1_NoRealPoint"
    C2 = "C2_Rational"
    C3 = "C3_MinimalConicBundle"
    C4 = "C4_MinimalDP2_Rank1"
    C5 = "C5_MinimalDP1_Rank1"


@dataclass(frozen=True)
class KollarClass:
    variant: KollarVariant
    m: Optional[int] = None

    def __post_init__(self):
        if self.variant is KollarVariant.C3:
            if self.m is None or self.m < 2:
                raise InputError("C3 needs m >= 2")
        elif self.m is not None:
            raise InputError("only C3 carries m")

    def to_json(self) -> dict:
        return {"kollar_class": self.variant.value, "m": self.m}


def _conic_class(m: int) -> KollarClass:
    # a minimal conic bundle with at most 2 singular fibers is rational
    return KollarClass(KollarVariant.C2) if m <= 1 else KollarClass(KollarVariant.C3, m)


def _kollar_pencil(surface: QuadricPencilSurface, has_real_point: Optional[bool]) -> KollarClass:
    if not smoothness_necessary(surface).ok:
        raise InputError("kollar class needs a pencil passing the smoothness checks")
    topo = real_components(surface)
    if has_real_point is False or topo.empty_locus:
        return KollarClass(KollarVariant.C1)
    # Relative minimalization: one real line of a line-pair fiber, or one
    # line from each of two conjugate fibers, is contractible over R.  Only
    # real point-type fibers survive.
    points = sum(1 for f in singular_fibers(surface) if f.is_real and f.real_type is FiberType.POINT)
    if points % 2:
        raise InconsistentError("odd number of point-type fibers")
    return _conic_class(points // 2)


def _kollar_lattice(pair: SurfacePair, has_real_point: Optional[bool]) -> KollarClass:
    real_point = pair.has_real_point if has_real_point is None else has_real_point
    if not real_point:
        return KollarClass(KollarVariant.C1)
    if pair.galois is None:
        raise InputError("kollar class needs the Galois involution")
    try:
        model, _ = surface_minimal_model(pair)
    except InconsistentError:
        # the only even unimodular lattice reachable is the quadric's
        return KollarClass(KollarVariant.C2)
    d = model.lattice.degree()
    _, rho = invariant_sublattice(model.lattice, [model.sigma])
    if d >= 5:
        return KollarClass(KollarVariant.C2)
    if rho == 1:
        if d == 2:
            return KollarClass(KollarVariant.C4)
        if d == 1:
            return KollarClass(KollarVariant.C5)
        raise InconsistentError(f"inconsistent over R: minimal del Pezzo of degree {d} with rank 1")
    if rho == 2 and (8 - d) % 2 == 0:
        return _conic_class((8 - d) // 2)
    raise InconsistentError(f"inconsistent over R: minimal surface with degree {d} and rank {rho}")


def kollar_class(obj: Union[SurfacePair, QuadricPencilSurface],
                 has_real_point: Optional[bool] = None) -> KollarClass:
    """Kollar class of a lattice pair (after the real MMP) or of a conic bundle pencil.

    ``has_real_point=False`` forces C1; pencils detect an empty real locus
    themselves.  Lattice inputs are first run through the Galois-only MMP.
    """
    if isinstance(obj, QuadricPencilSurface):
        return _kollar_pencil(obj, has_real_point)
    if isinstance(obj, SurfacePair):
        return _kollar_lattice(obj, has_real_point)
    raise InputError(f"cannot classify {type(obj).__name__}")


class VerdictReason(enum.Enum):
    RATIONAL = "Rational"
    CONIC_BUNDLE = "MinimalConicBundleWithRealPoint"
    NO_REAL_POINT = "NoRealPoint"
    DP_RANK_ONE = "MinimalDP1orDP2Rank1"


@dataclass(frozen=True)
class DegreeTwoVerdict:
    admits: bool
    reason: VerdictReason

    def __post_init__(self):
        expected = self.reason in (VerdictReason.RATIONAL, VerdictReason.CONIC_BUNDLE)
        if self.admits != expected:
            raise InputError("verdict and reason disagree")

    def to_json(self) -> dict:
        return {"degree_two": self.admits, "reason": self.reason.value}


def degree_two_verdict(k: KollarClass, has_real_point: bool) -> DegreeTwoVerdict:
    """Does the surface admit a degree-two real unirational parametrization?"""
    if k.variant is KollarVariant.C1 and has_real_point:
        raise InconsistentError("class C1 has no real point")
    if not has_real_point:
        # a unirational surface over R has real points
        return DegreeTwoVerdict(False, VerdictReason.NO_REAL_POINT)
    if k.variant is KollarVariant.C2:
        return DegreeTwoVerdict(True, VerdictReason.RATIONAL)
    if k.variant is KollarVariant.C3:
        return DegreeTwoVerdict(True, VerdictReason.CONIC_BUNDLE)
    return DegreeTwoVerdict(False, VerdictReason.DP_RANK_ONE)


# ---------------------------------------------------------------------------
# Conic bundle structure on minimal del Pezzo surfaces
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class DelPezzoStructure:
    """Either ``NotMinimal`` with a contractible orbit or ``ConicBundleClass`` with F."""

    variant: str
    witness: Optional[ContractibleOrbit] = None
    fiber_class: Optional[DivisorClass] = None
    pair_of_lines: Optional[tuple[DivisorClass, DivisorClass]] = None

    def to_json(self) -> dict:
        if self.variant == "NotMinimal":
            return {"variant": self.variant, "witness": [list(c) for c in self.witness.classes],
                    "orbit_kind": self.witness.kind.value}
        return {"variant": self.variant, "fiber_class": list(self.fiber_class),
                "lines": [list(c) for c in self.pair_of_lines]}


def lemma_5_7_structure(pair: SurfacePair) -> DelPezzoStructure:
    """Find a contractible Galois orbit, or a line E meeting its conjugate once.

    In the second case ``F = E + sigma E`` has ``F^2 = 0`` and ``F.K = -2``,
    so it is the class of a conic bundle defined over the ground field.
    """
    lat = pair.lattice
    if not 3 <= lat.degree() <= 7:
        raise InputError("structure detection needs degree between 3 and 7")
    sigma = pair.sigma
    real = pair.without_holo()
    orbits = contractible_orbits(real)
    if orbits:
        return DelPezzoStructure("NotMinimal", witness=orbits[0])
    K = lat.K
    for e in real.exceptional_curves():
        se = sigma(e)
        if lat.pair(e, se) == 1:
            f = tuple(a + b for a, b in zip(e, se))
            if lat.square(f) != 0 or lat.pair(f, K) != -2:
                raise InconsistentError("E + sigma E is not a conic class")
            return DelPezzoStructure("ConicBundleClass", fiber_class=f, pair_of_lines=(e, se))
    raise InconsistentError("minimal del Pezzo surface with neither a contractible orbit nor a conic class")


# ---------------------------------------------------------------------------
# Catalog of real plane involutions
# ---------------------------------------------------------------------------


class CatalogVariant(enum.Enum):
    L = "L"
    Q = "Q"
    T_4n = "T_4n"
    Tp_4n2 = "Tp_4n2"
    Tpp_4n = "Tpp_4n"
    B4 = "B4"
    G3 = "G3"
    K1 = "K1"
    dJ_g = "dJ_g"
    I_g = "I_g"
    Ip_g = "Ip_g"
    Ipp_g = "Ipp_g"


_PARAM_N = {CatalogVariant.T_4n, CatalogVariant.Tp_4n2, CatalogVariant.Tpp_4n}
_PARAM_G = {CatalogVariant.dJ_g, CatalogVariant.I_g, CatalogVariant.Ip_g, CatalogVariant.Ipp_g}
CONIC_VARIANTS = _PARAM_N | _PARAM_G


@dataclass(frozen=True)
class CatalogClass:
    """A catalog class; ``param`` is n for the T families and the genus g for dJ and I."""

    variant: CatalogVariant
    param: Optional[int] = None

    def __post_init__(self):
        v, p = self.variant, self.param
        if v in _PARAM_N or v in _PARAM_G:
            if p is None or p < 1:
                raise InputError(f"{v.value} needs a parameter >= 1")
        elif p is not None:
            raise InputError(f"{v.value} takes no parameter")

    @property
    def fixed_curve_genus(self) -> int:
        if self.variant in _PARAM_G:
            return self.param
        return {CatalogVariant.B4: 4, CatalogVariant.G3: 3, CatalogVariant.K1: 1}.get(self.variant, 0)

    @property
    def singular_fibers(self) -> Optional[int]:
        v, p = self.variant, self.param
        if v in (CatalogVariant.T_4n, CatalogVariant.Tpp_4n):
            return 4 * p
        if v is CatalogVariant.Tp_4n2:
            return 4 * p + 2
        if v in (CatalogVariant.dJ_g, CatalogVariant.I_g):
            return 2 * p + 2
        if v is CatalogVariant.Ip_g:
            return 2 * p + 3
        if v is CatalogVariant.Ipp_g:
            return 2 * p + 4
        return None

    @property
    def label(self) -> str:
        v = self.variant
        if v in _PARAM_N or v in _PARAM_G:
            prefix = v.value.split("_")[0]
            index = self.singular_fibers if v in _PARAM_N else self.param
            return f"{prefix}_{index}"
        return v.value

    def to_json(self) -> dict:
        return {"class": self.label, "variant": self.variant.value, "param": self.param}


@dataclass(frozen=True)
class AmbiguousSet:
    classes: tuple[CatalogClass, ...]

    @property
    def labels(self) -> list[str]:
        return [c.label for c in self.classes]

    def to_json(self) -> dict:
        return {"ambiguous": self.labels}


@dataclass(frozen=True)
class CatalogExtras:
    """Caller-supplied data the lattice cannot see.

    ``geometric_singular_fibers`` defaults to ``8 - K^2`` for conic bundles;
    ``fixed_curve_genus`` 0 means the fixed locus has no curve; ``twist_index``
    is the 0/1/2 twist of Trepalin and Iskovskikh involutions.
    """

    geometric_singular_fibers: Optional[int] = None
    fixed_curve_genus: Optional[int] = None
    twist_index: Optional[int] = None
    g_exceptional: bool = False
    quadric: bool = False

    def __post_init__(self):
        if self.twist_index not in (None, 0, 1, 2):
            raise InputError("twist index must be 0, 1 or 2")
        if self.fixed_curve_genus is not None and self.fixed_curve_genus < 0:
            raise InputError("genus must be non-negative")
        if self.geometric_singular_fibers is not None and self.geometric_singular_fibers < 0:
            raise InputError("fiber count must be non-negative")


_TWIST = {
    CatalogVariant.T_4n: 0, CatalogVariant.Tp_4n2: 1, CatalogVariant.Tpp_4n: 2,
    CatalogVariant.I_g: 0, CatalogVariant.Ip_g: 1, CatalogVariant.Ipp_g: 2,
}


def _conic_candidates(fibers: int, extras: CatalogExtras) -> list[CatalogClass]:
    out = []
    for v in (CatalogVariant.T_4n, CatalogVariant.Tp_4n2, CatalogVariant.Tpp_4n):
        base = 2 if v is CatalogVariant.Tp_4n2 else 0
        if fibers >= 4 and (fibers - base) % 4 == 0 and (fibers - base) // 4 >= 1:
            out.append(CatalogClass(v, (fibers - base) // 4))
    offsets = {CatalogVariant.dJ_g: 2, CatalogVariant.I_g: 2, CatalogVariant.Ip_g: 3, CatalogVariant.Ipp_g: 4}
    for v, off in offsets.items():
        if (fibers - off) % 2 == 0 and (fibers - off) // 2 >= 1:
            if (v is CatalogVariant.dJ_g) != extras.g_exceptional:
                continue
            out.append(CatalogClass(v, (fibers - off) // 2))
    return out


def _consistent(c: CatalogClass, extras: CatalogExtras) -> bool:
    if extras.fixed_curve_genus is not None and c.fixed_curve_genus != extras.fixed_curve_genus:
        return False
    if extras.twist_index is not None and c.variant in _TWIST and _TWIST[c.variant] != extras.twist_index:
        return False
    return True


def catalog_classify(pair: SurfacePair, extras: Optional[CatalogExtras] = None) -> Union[CatalogClass, AmbiguousSet]:
    """Match a minimal pair against the catalog rows.

    Returns the unique consistent class, or ``AmbiguousSet`` when the extras
    leave several rows open.  Raises ``InconsistentError`` when none fits.
    """
    extras = extras or CatalogExtras()
    if pair.galois is None or pair.holo is None:
        raise InputError("catalog classification needs both involutions")
    minimal, _ = is_minimal_pair(pair)
    if not minimal:
        raise InputError("pair is not minimal")
    lat = pair.lattice
    d = lat.degree()
    _, rho = invariant_sublattice(lat, [pair.galois, pair.holo])
    if extras.quadric:
        cands = [CatalogClass(CatalogVariant.Q)]
    elif d == 9:
        cands = [CatalogClass(CatalogVariant.L)]
    elif rho == 1:
        cands = {
            1: [CatalogClass(CatalogVariant.B4)],
            2: [CatalogClass(CatalogVariant.G3), CatalogClass(CatalogVariant.K1)],
        }.get(d, [])
    elif rho == 2:
        fibers = extras.geometric_singular_fibers
        if fibers is None:
            fibers = 8 - d
        elif fibers != 8 - d:
            raise InconsistentError(f"{fibers} singular fibers on a conic bundle of degree {d}")
        cands = _conic_candidates(fibers, extras)
    else:
        cands = []
    cands = [c for c in cands if _consistent(c, extras)]
    if not cands:
        raise InconsistentError(f"no catalog class matches degree {d}, rank {rho} and the given extras")
    if len(cands) == 1:
        return cands[0]
    return AmbiguousSet(tuple(cands))


class QuotientType(enum.Enum):
    RATIONAL = "Rational"
    ISKOVSKIKH = "MinimalIskovskikh4Fibers"
    CONIC_BUNDLE = "RelativelyMinimalConicBundle"


def quotient_type(c: Union[CatalogClass, AmbiguousSet]) -> QuotientType:
    """Birational type of the quotient of the surface by the involution."""
    if isinstance(c, AmbiguousSet):
        raise InputError("quotient type of an ambiguous class")
    if c.variant in (CatalogVariant.L, CatalogVariant.Q, CatalogVariant.B4, CatalogVariant.G3):
        return QuotientType.RATIONAL
    if c.variant is CatalogVariant.K1:
        return QuotientType.ISKOVSKIKH
    return QuotientType.CONIC_BUNDLE


def all_catalog_variants() -> list[CatalogClass]:
    """One representative of each catalog family (parameter 1 where needed)."""
    return [CatalogClass(v, 1 if v in CONIC_VARIANTS else None) for v in CatalogVariant]
