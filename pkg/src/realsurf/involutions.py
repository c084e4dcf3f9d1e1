"""Order-two isometries of Picard lattices and their group cohomology.

Both the real structure (complex conjugation acting on the geometric
Picard lattice) and a biregular involution act through ``LatticeInvolution``.
Besides ``PicardLattice`` this module accepts ``ToyLattice`` (any diagonal
+-1 Gram matrix, no canonical class) so that H^1 can be computed for small
abstract modules.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Union

from .errors import InputError
from .exactnum import IntMatrix, integer_kernel, lcm, smith_normal_form, solve_in_basis
from .picard import PicardLattice, Sublattice


@dataclass(frozen=True)
class ToyLattice:
    """Z^k with a diagonal +-1 pairing and no canonical class."""

    signs: tuple[int, ...]

    def __post_init__(self):
        if not self.signs or any(s not in (1, -1) for s in self.signs):
            raise InputError("toy lattice needs a nonempty diagonal of +-1")

    @property
    def rank(self) -> int:
        return len(self.signs)

    @property
    def gram(self) -> IntMatrix:
        return IntMatrix.diagonal(list(self.signs))

    @property
    def canonical(self):
        return None


Lattice = Union[PicardLattice, ToyLattice]


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violation: Optional[str] = None


def validate_involution(lattice: Lattice, m: IntMatrix) -> ValidationReport:
    """Check M^2 = I, M^T G M = G and M K = K, reporting the first failure."""
    if not m.is_square() or m.nrows != lattice.rank:
        return ValidationReport(False, f"matrix shape {m.shape} does not match rank {lattice.rank}")
    ident = IntMatrix.identity(lattice.rank)
    if m @ m != ident:
        return ValidationReport(False, "matrix does not square to the identity")
    g = lattice.gram
    if m.T @ g @ m != g:
        return ValidationReport(False, "pairing not preserved")
    k = lattice.canonical
    if k is not None and m.apply(k) != tuple(k):
        return ValidationReport(False, "canonical class not fixed")
    return ValidationReport(True)


@dataclass(frozen=True)
class LatticeInvolution:
    """An involutive isometry acting on column vectors of class coordinates."""

    matrix: IntMatrix

    def __call__(self, d: Sequence[int]) -> tuple[int, ...]:
        return self.matrix.apply(d)

    @classmethod
    def on(cls, lattice: Lattice, m) -> LatticeInvolution:
        """Build and validate; raises ``InputError`` on a violation."""
        mat = m if isinstance(m, IntMatrix) else IntMatrix(m)
        rep = validate_involution(lattice, mat)
        if not rep.ok:
            raise InputError(f"invalid involution: {rep.violation}")
        return cls(mat)

    @classmethod
    def identity(cls, lattice: Lattice) -> LatticeInvolution:
        return cls(IntMatrix.identity(lattice.rank))

    def commutes_with(self, other: LatticeInvolution) -> bool:
        return self.matrix @ other.matrix == other.matrix @ self.matrix

    def trace(self) -> int:
        return self.matrix.trace()


def _matrix(m) -> IntMatrix:
    return m.matrix if isinstance(m, LatticeInvolution) else m


def invariant_sublattice(lattice: Lattice, involutions: Sequence) -> tuple[list[tuple[int, ...]], int]:
    """Saturated basis of the common fixed lattice and its rank."""
    mats = [_matrix(m) for m in involutions]
    for i, a in enumerate(mats):
        for b in mats[i + 1:]:
            if a @ b != b @ a:
                raise InputError("involutions do not commute")
    ident = IntMatrix.identity(lattice.rank)
    rows = [r for m in mats for r in (m - ident).rows]
    if not rows or all(not any(r) for r in rows):
        basis = [ident.column(j) for j in range(lattice.rank)]
    else:
        basis = integer_kernel(IntMatrix(rows))
    return basis, len(basis)


def invariant_picard_sublattice(lattice: PicardLattice, involutions: Sequence) -> Sublattice:
    basis, _ = invariant_sublattice(lattice, [m for m in involutions if m is not None])
    return Sublattice(lattice, tuple(basis))


def anti_invariant_basis(lattice: Lattice, m) -> list[tuple[int, ...]]:
    mat = _matrix(m)
    plus = mat + IntMatrix.identity(lattice.rank)
    if not any(any(r) for r in plus.rows):
        return [IntMatrix.identity(lattice.rank).column(j) for j in range(lattice.rank)]
    return integer_kernel(plus)


@dataclass(frozen=True)
class AbelianGroupInvariants:
    """Finite abelian group ``Z/d_1 + ... + Z/d_k`` with ``d_1 | d_2 | ...``."""

    elementary_divisors: tuple[int, ...] = ()

    def __post_init__(self):
        ds = self.elementary_divisors
        if any(d < 2 for d in ds):
            raise InputError("elementary divisors must be >= 2")
        if any(b % a for a, b in zip(ds, ds[1:])):
            raise InputError("elementary divisors must divide successively")

    @property
    def order(self) -> int:
        out = 1
        for d in self.elementary_divisors:
            out *= d
        return out

    def is_trivial(self) -> bool:
        return not self.elementary_divisors


def h1_z2(lattice: Lattice, m) -> AbelianGroupInvariants:
    """H^1 of Z/2 acting through ``m``: anti-invariants modulo ``(m - 1)``-image.

    The image of ``m - 1`` lies inside ``ker(m + 1)`` because ``m^2 = 1``; we
    write its generators in a saturated basis of ``ker(m + 1)`` and read the
    quotient off the Smith normal form.
    """
    mat = _matrix(m)
    n = lattice.rank
    anti = anti_invariant_basis(lattice, mat)
    if not anti:
        return AbelianGroupInvariants()
    minus = mat - IntMatrix.identity(n)
    gens = [solve_in_basis(anti, minus.column(j)) for j in range(n)]
    coeff = IntMatrix.from_columns(gens)
    _, d, _ = smith_normal_form(coeff)
    diag = [d[i, i] for i in range(min(d.shape))]
    diag += [0] * (len(anti) - len(diag))
    if any(x == 0 for x in diag):
        raise InputError("image of (m - 1) has smaller rank; not an involution")
    return AbelianGroupInvariants(tuple(x for x in diag if x > 1))


def annihilator_exponent(g: AbelianGroupInvariants) -> int:
    return lcm(g.elementary_divisors)


def reflection_about_K_check(lattice: PicardLattice, m, sublattice: Optional[Sequence] = None) -> bool:
    """True iff ``m`` fixes K and acts as ``-1`` on ``K^perp``.

    With ``sublattice`` (a basis), the test is made on ``K^perp`` inside it,
    matching the statement that ``-tau*`` is the reflection in ``K^perp`` on
    the real Picard group.
    """
    mat = _matrix(m)
    K = lattice.K
    if mat.apply(K) != K:
        return False
    if sublattice is None:
        perp = lattice.orthogonal_complement([K])
    else:
        sub = [tuple(b) for b in sublattice]
        coeffs = integer_kernel(IntMatrix([[lattice.pair(K, b) for b in sub]]))
        perp = [tuple(sum(c * b[i] for c, b in zip(cv, sub)) for i in range(lattice.rank))
                for cv in coeffs]
    return all(mat.apply(b) == tuple(-x for x in b) for b in perp)


def _from_rule(lattice: PicardLattice, rule) -> LatticeInvolution:
    cols = [rule(lattice.basis_vector(j)) for j in range(lattice.rank)]
    return LatticeInvolution.on(lattice, IntMatrix.from_columns(cols))


def geiser_matrix(lattice: PicardLattice) -> LatticeInvolution:
    """D -> (D.K) K - D on Z^{1,7}."""
    if lattice.n != 7:
        raise InputError("the Geiser involution needs n = 7")
    K = lattice.K
    return _from_rule(lattice, lambda d: tuple(lattice.pair(d, K) * k - x for k, x in zip(K, d)))


def bertini_matrix(lattice: PicardLattice) -> LatticeInvolution:
    """D -> 2 (D.K) K - D on Z^{1,8}."""
    if lattice.n != 8:
        raise InputError("the Bertini involution needs n = 8")
    K = lattice.K
    return _from_rule(lattice, lambda d: tuple(2 * lattice.pair(d, K) * k - x for k, x in zip(K, d)))


def lefschetz_number(lattice: Lattice, m) -> int:
    # H^0 and H^4 contribute 1 each, H^2 = Pic contributes the trace
    return 2 + _matrix(m).trace()


def permutation_involution(lattice: PicardLattice, perm: Sequence[int]) -> LatticeInvolution:
    """Involution permuting E_1..E_n by a 1-based permutation (``perm[i-1]`` is the image of i)."""
    n = lattice.n
    if sorted(perm) != list(range(1, n + 1)):
        raise InputError("not a permutation of 1..n")
    cols = [lattice.H] + [lattice.E(perm[i]) for i in range(n)]
    return LatticeInvolution.on(lattice, IntMatrix.from_columns(cols))


def reflection(lattice: PicardLattice, root: Sequence[int]) -> LatticeInvolution:
    """Reflection x -> x + (x.r) r in a (-2)-class r orthogonal to K."""
    r = lattice.check(root)
    if lattice.square(r) != -2 or lattice.pair(r, lattice.K) != 0:
        raise InputError("reflection needs a root class")
    return _from_rule(lattice, lambda d: tuple(x + lattice.pair(d, r) * y for x, y in zip(d, r)))
