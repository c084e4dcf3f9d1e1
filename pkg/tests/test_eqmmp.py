import random

import pytest
from hypothesis import given, strategies as st

from oracles import rank_q
from realsurf import fixtures
from realsurf.eqmmp import (
    ContractibleOrbit,
    OrbitKind,
    SurfaceKind,
    SurfacePair,
    classify_minimal_pair,
    contract,
    contractible_orbits,
    is_minimal_pair,
    is_surface_minimal,
    run_eqmmp,
    surface_minimal_model,
)
from realsurf.errors import InputError
from realsurf.involutions import LatticeInvolution, invariant_sublattice, permutation_involution
from realsurf.picard import PicardLattice


def add(a, b):
    return tuple(x + y for x, y in zip(a, b))


@pytest.fixture(scope="module")
def ex25():
    return fixtures.load("ex25_lattice")


def test_ex25_contracts_one_tau_paired_orbit(ex25):
    lat = ex25.lattice
    assert invariant_sublattice(lat, [ex25.galois, ex25.holo])[1] == 3
    assert not is_minimal_pair(ex25)[0]
    minimal, log = run_eqmmp(ex25)
    assert len(log.steps) == 1
    step = log.steps[0]
    # the real line-pair fibers over u = 1 and u = -1 carry E4 and E5
    assert set(step.orbit) == {lat.E(4), lat.E(5)}
    assert (step.rank_before, step.rank_after) == (8, 6)
    assert minimal.lattice.rank == 6


def test_ex25_minimal_pair(ex25):
    minimal, log = run_eqmmp(ex25)
    lat = minimal.lattice
    basis, rho = invariant_sublattice(lat, [minimal.galois, minimal.holo])
    assert rho == 2
    F, K = minimal.fiber_class, lat.K
    # F and K span the invariants over Q
    assert rank_q(basis + [F, K]) == 2 == rank_q([F, K])
    assert is_minimal_pair(minimal) == (True, None)
    surf_min, witness = is_surface_minimal(minimal)
    assert not surf_min and witness.kind is OrbitKind.CONJUGATE_PAIR


def test_ex25_fiber_relations(ex25):
    minimal, log = run_eqmmp(ex25)
    old, new = ex25.lattice, minimal.lattice
    new_basis = log.steps[0].new_basis

    def image(c):
        return new.basis_vector(new_basis.index(c))

    sigma, tau, F = minimal.galois, minimal.holo, minimal.fiber_class
    e0 = image(old.E(2))  # component over u = 2
    assert add(e0, sigma(e0)) == F
    e2 = image(old.E(6))  # component over u = i
    assert add(e2, tau(sigma(e2))) == F
    assert new.square(F) == 0 and new.pair(F, new.K) == -2


def test_ex25_classification(ex25):
    minimal, _ = run_eqmmp(ex25)
    cls = classify_minimal_pair(minimal)
    assert cls.variant == "ConicFibration" and cls.invariant_rank == 2
    assert cls.case == 2
    from dataclasses import replace
    assert classify_minimal_pair(replace(minimal, conic_model=None)).case is None


def test_ex28_is_already_minimal():
    pair = fixtures.load("ex28_lattice")
    assert is_minimal_pair(pair) == (True, None)
    assert invariant_sublattice(pair.lattice, [pair.galois, pair.holo])[1] == 2
    assert invariant_sublattice(pair.lattice, [pair.galois])[1] == 4
    cls = classify_minimal_pair(pair)
    assert (cls.variant, cls.invariant_rank, cls.case) == ("ConicFibration", 2, 3)


@pytest.mark.parametrize("name,degree,r,r_ns,over_field", [
    ("geiser_split", 2, 2, 1, False),
    ("bertini_split", 1, 1, 1, False),
    ("geiser_twisted", 2, 2, 2, True),
    ("bertini_twisted", 1, 1, 1, True),
])
def test_rank_one_del_pezzo_pairs(name, degree, r, r_ns, over_field):
    pair = fixtures.load(name)
    assert is_minimal_pair(pair)[0]
    cls = classify_minimal_pair(pair)
    assert (cls.variant, cls.degree, cls.r, cls.r_ns, cls.minimal_over_field) == (
        "DelPezzoRankOne", degree, r, r_ns, over_field)


def test_split_surfaces_contract_to_the_plane():
    for name in ("split_dp6", "split_dp3", "geiser_split"):
        model, log = surface_minimal_model(fixtures.load(name))
        assert model.lattice.n == 0
        assert sum(s.rank_before - s.rank_after for s in log.steps) == fixtures.load(name).lattice.n


def test_quadric_branch_is_skipped():
    # sigma swaps E1, E2 on the blow-up of one real and two conjugate points
    lat = PicardLattice(3)
    sigma = permutation_involution(lat, [1, 3, 2])
    model, log = surface_minimal_model(SurfacePair(lat, sigma))
    assert model.lattice.n == 0


def test_contract_rejects_non_contractible_orbits():
    lat = PicardLattice(2)
    pair = SurfacePair(lat, permutation_involution(lat, [2, 1]))
    with pytest.raises(InputError):
        contract(pair, ContractibleOrbit((lat.E(1),), OrbitKind.REAL_SINGLE))


def test_only_full_orbits_are_contractible():
    lat = PicardLattice(2)
    pair = SurfacePair(lat, permutation_involution(lat, [2, 1]))
    kinds = {(frozenset(o.classes), o.kind) for o in contractible_orbits(pair)}
    # E1 alone is not an orbit; the line through the two points is real
    assert kinds == {
        (frozenset({lat.E(1), lat.E(2)}), OrbitKind.CONJUGATE_PAIR),
        (frozenset({(1, -1, -1)}), OrbitKind.REAL_SINGLE),
    }


def test_conic_bundle_without_curves_needs_effectivity():
    lat = PicardLattice(3)
    pair = SurfacePair(lat, LatticeInvolution.identity(lat), surface_kind=SurfaceKind.CONIC_BUNDLE_MODEL)
    with pytest.raises(InputError, match="effectivity"):
        contractible_orbits(pair)


def test_curves_must_be_permuted():
    lat = PicardLattice(2)
    sigma = permutation_involution(lat, [2, 1])
    with pytest.raises(InputError, match="permute"):
        SurfacePair(lat, sigma, curves=(lat.E(1),))
    with pytest.raises(InputError, match="negative"):
        SurfacePair(lat, sigma, curves=(lat.H,))


def test_minimal_dp4_conic_bundle():
    pair = fixtures.load("dp4_conic_bundle")
    assert is_surface_minimal(pair) == (True, None)
    assert invariant_sublattice(pair.lattice, [pair.galois])[1] == 2


def test_non_minimal_pair_cannot_be_classified(ex25):
    with pytest.raises(InputError, match="not minimal"):
        classify_minimal_pair(ex25)


@st.composite
def permutation_pairs(draw):
    n = draw(st.integers(1, 7))
    rng = random.Random(draw(st.integers(0, 10 ** 6)))
    pts = list(range(1, n + 1))
    rng.shuffle(pts)
    sigma = list(range(1, n + 1))
    k = rng.randint(0, n // 2)
    for a, b in zip(pts[: 2 * k: 2], pts[1: 2 * k: 2]):
        sigma[a - 1], sigma[b - 1] = b, a
    fixed = pts[2 * k:]
    tau = list(range(1, n + 1))
    j = rng.randint(0, len(fixed) // 2)
    for a, b in zip(fixed[: 2 * j: 2], fixed[1: 2 * j: 2]):
        tau[a - 1], tau[b - 1] = b, a
    return n, sigma, tau


@given(permutation_pairs())
def test_mmp_on_point_permutations(data):
    n, sigma, tau = data
    lat = PicardLattice(n)
    pair = SurfacePair(lat, permutation_involution(lat, sigma), permutation_involution(lat, tau))
    minimal, log = run_eqmmp(pair)
    assert is_minimal_pair(minimal)[0]
    rho = invariant_sublattice(lat, [pair.galois, pair.holo])[1]
    for step in log.steps:
        assert step.rank_before - step.rank_after == len(step.orbit)
    # each step removes exactly one invariant class
    rho_min = invariant_sublattice(minimal.lattice, [minimal.galois, minimal.holo])[1]
    assert rho - rho_min == len(log.steps)
    assert minimal.lattice.degree() >= lat.degree()
