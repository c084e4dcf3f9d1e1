"""Equivariant minimal model program at the level of Picard lattices.

A ``SurfacePair`` bundles a Picard lattice with the real structure ``galois``
and an optional biregular involution ``holo``.  Contractible orbits are
found with the lattice form of the minimality criterion: a Galois orbit of
pairwise disjoint (-1)-curves whose sum L satisfies ``tau L = L`` or
``tau L . L = 0``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Any, Optional, Sequence

from .errors import InconsistentError, InputError
from .exactnum import IntMatrix
from .involutions import LatticeInvolution, invariant_sublattice, validate_involution
from .picard import DivisorClass, PicardLattice, Sublattice, r_invariant


class SurfaceKind(enum.Enum):
    DEL_PEZZO_BLOWUP = "del_pezzo_blowup"
    CONIC_BUNDLE_MODEL = "conic_bundle_model"


class OrbitKind(enum.Enum):
    REAL_SINGLE = "RealSingle"
    CONJUGATE_PAIR = "ConjugatePair"
    TAU_PAIRED_UNION = "TauPairedUnion"


@dataclass(frozen=True)
class SurfacePair:
    """Lattice-level model of a real surface with an optional involution.

    ``curves`` lists the classes of irreducible negative curves when they are
    known explicitly (weak del Pezzo or conic-bundle models).  Without it the
    surface must be a del Pezzo blow-up in general position, where every
    exceptional class is a (-1)-curve.
    """

    lattice: PicardLattice
    galois: Optional[LatticeInvolution] = None
    holo: Optional[LatticeInvolution] = None
    has_real_point: bool = True
    surface_kind: SurfaceKind = SurfaceKind.DEL_PEZZO_BLOWUP
    curves: Optional[tuple[DivisorClass, ...]] = None
    fiber_class: Optional[DivisorClass] = None
    conic_model: Any = None
    field_mode: str = "real"
    name: str = ""

    def __post_init__(self):
        for label, inv in (("galois", self.galois), ("holo", self.holo)):
            if inv is None:
                continue
            rep = validate_involution(self.lattice, inv.matrix)
            if not rep.ok:
                raise InputError(f"{label} involution: {rep.violation}")
        if self.galois is not None and self.holo is not None:
            if not self.galois.commutes_with(self.holo):
                raise InputError("galois and holo involutions do not commute")
        if self.field_mode not in ("real", "general"):
            raise InputError("field_mode must be 'real' or 'general'")
        if self.curves is not None:
            curves = tuple(sorted({self.lattice.check(c) for c in self.curves}))
            object.__setattr__(self, "curves", curves)
            cs = set(curves)
            for inv in (self.galois, self.holo):
                if inv is not None and any(inv(c) not in cs for c in curves):
                    raise InputError("involution does not permute the listed curves")
            if any(self.lattice.square(c) >= 0 for c in curves):
                raise InputError("listed curves must have negative self-intersection")
        if self.fiber_class is not None:
            object.__setattr__(self, "fiber_class", self.lattice.check(self.fiber_class))

    @property
    def sigma(self) -> LatticeInvolution:
        if self.galois is None:
            raise InputError("pair has no Galois involution")
        return self.galois

    def without_holo(self) -> SurfacePair:
        return replace(self, holo=None)

    def exceptional_curves(self) -> list[DivisorClass]:
        lat = self.lattice
        if self.curves is not None:
            K = lat.K
            return [c for c in self.curves if lat.square(c) == -1 and lat.pair(c, K) == -1]
        if self.surface_kind is not SurfaceKind.DEL_PEZZO_BLOWUP:
            raise InputError("geometric effectivity unknown")
        return lat.exceptional_classes()


@dataclass(frozen=True)
class ContractibleOrbit:
    classes: tuple[DivisorClass, ...]
    kind: OrbitKind

    def total(self) -> DivisorClass:
        return tuple(map(sum, zip(*self.classes)))


def _pairwise_disjoint(lat: PicardLattice, classes: Sequence[DivisorClass]) -> bool:
    return all(
        lat.pair(a, b) == 0 for i, a in enumerate(classes) for b in classes[i + 1:]
    )


def contractible_orbits(pair: SurfacePair, use_tau: bool = True) -> list[ContractibleOrbit]:
    lat = pair.lattice
    sigma = pair.sigma
    tau = pair.holo if use_tau else None
    out: list[ContractibleOrbit] = []
    seen: set[frozenset] = set()
    for e in pair.exceptional_curves():
        orbit = tuple(sorted({e, sigma(e)}))
        if not _pairwise_disjoint(lat, orbit):
            continue
        kind = OrbitKind.REAL_SINGLE if len(orbit) == 1 else OrbitKind.CONJUGATE_PAIR
        classes = orbit
        if tau is not None:
            image = tuple(sorted({tau(c) for c in orbit}))
            total = tuple(map(sum, zip(*orbit)))
            tau_total = tau(total)
            if tau_total != total:
                union = tuple(sorted(set(orbit) | set(image)))
                if lat.pair(total, tau_total) != 0 or not _pairwise_disjoint(lat, union):
                    continue
                classes, kind = union, OrbitKind.TAU_PAIRED_UNION
        key = frozenset(classes)
        if key in seen:
            continue
        seen.add(key)
        out.append(ContractibleOrbit(classes, kind))
    return out


def is_minimal_pair(pair: SurfacePair) -> tuple[bool, Optional[ContractibleOrbit]]:
    orbits = contractible_orbits(pair)
    return (not orbits, orbits[0] if orbits else None)


def is_surface_minimal(pair: SurfacePair) -> tuple[bool, Optional[ContractibleOrbit]]:
    """Minimality over the ground field, ignoring the involution."""
    orbits = contractible_orbits(pair, use_tau=False)
    return (not orbits, orbits[0] if orbits else None)


@dataclass(frozen=True)
class ContractionStep:
    orbit: tuple[DivisorClass, ...]
    rank_before: int
    rank_after: int
    new_basis: tuple[DivisorClass, ...]

    def to_json(self) -> dict:
        return {
            "orbit": [list(c) for c in self.orbit],
            "rank_before": self.rank_before,
            "rank_after": self.rank_after,
            "new_basis": [list(c) for c in self.new_basis],
        }


@dataclass(frozen=True)
class ContractionLog:
    steps: tuple[ContractionStep, ...] = field(default=())

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]


def _standard_basis(lat: PicardLattice, orbit: Sequence[DivisorClass]) -> Optional[list[DivisorClass]]:
    """Find h, f_1..f_m spanning the complement of ``orbit`` in standard form."""
    m = lat.n - len(orbit)
    pool = [c for c in lat.exceptional_classes() if all(lat.pair(c, e) == 0 for e in orbit)]
    standard = [lat.E(i) for i in range(1, lat.n + 1)]
    pool.sort(key=lambda c: (standard.index(c) if c in standard else len(standard), c))
    k_new = tuple(k - sum(e[i] for e in orbit) for i, k in enumerate(lat.K))

    chosen: list[DivisorClass] = []

    def search(start: int) -> bool:
        if len(chosen) == m:
            return True
        for idx in range(start, len(pool)):
            c = pool[idx]
            if all(lat.pair(c, f) == 0 for f in chosen):
                chosen.append(c)
                if search(idx + 1):
                    return True
                chosen.pop()
        return False

    if not search(0):
        return None
    rest = tuple(k - sum(f[i] for f in chosen) for i, k in enumerate(k_new))
    if any(x % 3 for x in rest):
        return None
    h = tuple(-x // 3 for x in rest)
    if lat.square(h) != 1:
        return None
    return [h] + chosen


def contract(pair: SurfacePair, orbit: ContractibleOrbit) -> tuple[SurfacePair, ContractionStep]:
    """Blow down ``orbit`` and re-express everything on Z^{1, n-k}."""
    lat = pair.lattice
    use_tau = pair.holo is not None
    if orbit not in contractible_orbits(pair, use_tau=use_tau):
        raise InputError("orbit is not contractible for this pair")
    es = list(orbit.classes)
    basis = _standard_basis(lat, es)
    if basis is None:
        raise InconsistentError("orbit not standardizable")
    m = len(basis) - 1
    p = IntMatrix.from_columns(basis + es)
    g = lat.gram
    if p.T @ g @ p != g:
        raise InconsistentError("orbit not standardizable")
    p_inv = g @ p.T @ g
    new_lat = PicardLattice(m)

    def descend(inv: Optional[LatticeInvolution]) -> Optional[LatticeInvolution]:
        if inv is None:
            return None
        q = p_inv @ inv.matrix @ p
        for i in range(q.nrows):
            for j in range(q.ncols):
                if (i <= m) != (j <= m) and q[i, j] != 0:
                    raise InconsistentError("involution does not preserve the contracted orbit")
        return LatticeInvolution.on(new_lat, [r[: m + 1] for r in q.rows[: m + 1]])

    def push(c: DivisorClass) -> DivisorClass:
        proj = list(c)
        for e in es:
            t = lat.pair(c, e)
            proj = [x + t * y for x, y in zip(proj, e)]
        return p_inv.apply(proj)[: m + 1]

    if push(lat.K) != new_lat.K:
        raise InconsistentError("canonical class does not descend")
    curves = None
    if pair.curves is not None:
        kept = set()
        for c in pair.curves:
            if c in es:
                continue
            d = push(c)
            if new_lat.square(d) < 0:
                kept.add(d)
        curves = tuple(sorted(kept))
    fiber = push(pair.fiber_class) if pair.fiber_class is not None else None
    new_pair = replace(
        pair,
        lattice=new_lat,
        galois=descend(pair.galois),
        holo=descend(pair.holo),
        curves=curves,
        fiber_class=fiber,
    )
    step = ContractionStep(tuple(es), lat.rank, new_lat.rank, tuple(basis))
    return new_pair, step


def run_eqmmp(pair: SurfacePair, use_tau: bool = True) -> tuple[SurfacePair, ContractionLog]:
    """Contract the first contractible orbit until the pair is minimal.

    With ``use_tau=False`` the involution is dropped and the result is a
    minimal surface over the ground field.
    """
    current = pair if use_tau else pair.without_holo()
    steps = []
    while True:
        orbits = contractible_orbits(current)
        if not orbits:
            return current, ContractionLog(tuple(steps))
        for orbit in orbits:
            try:
                current, step = contract(current, orbit)
            except InconsistentError:
                continue
            steps.append(step)
            break
        else:
            raise InconsistentError(
                "every contractible orbit leads outside the P^2 blow-up model (quadric reached)"
            )


def surface_minimal_model(pair: SurfacePair) -> tuple[SurfacePair, ContractionLog]:
    return run_eqmmp(pair, use_tau=False)


@dataclass(frozen=True)
class MinimalPairClass:
    """Classification of a minimal pair.

    ``variant`` is ``"ConicFibration"``, ``"DelPezzoRankOne"`` or
    ``"QuadricRulingSwap"``.  The last one needs an even lattice and is never
    produced from Z^{1,n} input.
    """

    variant: str
    invariant_rank: int
    case: Optional[int] = None
    degree: Optional[int] = None
    r: Optional[int] = None
    r_ns: Optional[int] = None
    minimal_over_field: Optional[bool] = None

    def to_json(self) -> dict:
        out = {"variant": self.variant, "invariant_rank": self.invariant_rank}
        if self.variant == "ConicFibration":
            out["case"] = self.case if self.case is not None else "undetermined at lattice level"
        else:
            out.update(degree=self.degree, r=self.r, r_ns=self.r_ns,
                       minimal_over_field=self.minimal_over_field)
        return out


# Non-minimal rank-one del Pezzo rows: degree -> admissible r.
DEL_PEZZO_TABLE = {
    "real": {4: {2}, 2: {1, 2}, 1: {1}},
    "general": {6: {3}, 4: {2, 4}, 3: {3}, 2: {1, 2}, 1: {1}},
}


def _conic_case(model) -> Optional[int]:
    if model is None:
        return None
    from .conicbundle import BaseInvolution, FiberInvolution, singular_fibers

    if model.base_involution is BaseInvolution.NEGATE_T:
        return 2 if singular_fibers(model) else 1
    if model.fiber_involution is FiberInvolution.NEGATE_X2:
        return 3
    return None


def classify_minimal_pair(pair: SurfacePair) -> MinimalPairClass:
    minimal, _ = is_minimal_pair(pair)
    if not minimal:
        raise InputError("pair is not minimal")
    lat = pair.lattice
    invs = [m for m in (pair.galois, pair.holo) if m is not None]
    basis, rho = invariant_sublattice(lat, invs)
    if rho > 1:
        return MinimalPairClass("ConicFibration", rho, case=_conic_case(pair.conic_model))
    degree = lat.degree()
    r = r_invariant(Sublattice(lat, tuple(basis)))
    ns_basis, ns_rank = invariant_sublattice(lat, [pair.sigma])
    r_ns = r_invariant(Sublattice(lat, tuple(ns_basis)))
    over_field = ns_rank == 1
    if not over_field:
        allowed = DEL_PEZZO_TABLE[pair.field_mode].get(degree, set())
        if r_ns not in allowed:
            raise InconsistentError(
                f"inconsistent minimal pair: degree {degree} with r = {r_ns}"
            )
    return MinimalPairClass("DelPezzoRankOne", rho, degree=degree, r=r, r_ns=r_ns,
                            minimal_over_field=over_field)


def conic_bundle_involution(lattice: PicardLattice, fiber_perm: Sequence[int],
                            swaps: Sequence[int]) -> LatticeInvolution:
    """Involution of a conic-bundle lattice model acting on singular fibers.

    The model is P^2 blown up in ``E_1`` (fiber class ``F = H - E_1``) and then
    in one point on each of ``n - 1`` fibers; fiber ``j`` (0-based) has the
    components ``E_{j+2}`` and ``F - E_{j+2}``.  ``fiber_perm[j]`` is the image
    fiber and ``swaps`` lists the fibers whose ``E`` component goes to the
    ``F - E`` component of the image.
    """
    n = lattice.n
    f = n - 1
    if sorted(fiber_perm) != list(range(f)):
        raise InputError("fiber_perm must permute the singular fibers")
    swaps = set(swaps)
    if len(swaps) % 2:
        raise InputError("an odd number of component swaps is not an isometry")
    H, E1 = lattice.H, lattice.E(1)
    F = tuple(a - b for a, b in zip(H, E1))

    def comb(*terms):
        out = [0] * lattice.rank
        for coef, vec in terms:
            for i, x in enumerate(vec):
                out[i] += coef * x
        return tuple(out)

    cols = {}
    for j in range(f):
        target = lattice.E(fiber_perm[j] + 2)
        cols[j + 2] = comb((1, F), (-1, target)) if j in swaps else target
    gh = comb((1, H), (len(swaps) // 2, F), *[(-1, lattice.E(fiber_perm[j] + 2)) for j in swaps])
    cols[0] = gh
    cols[1] = comb((1, gh), (-1, F))
    return LatticeInvolution.on(lattice, IntMatrix.from_columns([cols[i] for i in range(n + 1)]))
