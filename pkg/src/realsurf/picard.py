"""The odd unimodular lattice Z^{1,n} of a blow-up of P^2 in n points.

Classes are integer vectors in the basis ``(H, E_1, ..., E_n)`` with the
pairing ``diag(1, -1, ..., -1)``; the canonical class is
``K = -3H + E_1 + ... + E_n``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from math import gcd, isqrt
from typing import Iterable, Sequence

from .errors import InputError
from .exactnum import IntMatrix, integer_kernel

DivisorClass = tuple[int, ...]

# NS(X) over R may be a finite-index subgroup of the Galois invariants; this
# package always works with the full (saturated) invariant sublattice.
NS_ASSUMPTION = "full-invariant-sublattice"


@dataclass(frozen=True)
class PicardLattice:
    n: int

    def __post_init__(self):
        if self.n < 0:
            raise InputError("number of blown-up points must be non-negative")

    @property
    def rank(self) -> int:
        return self.n + 1

    @property
    def K(self) -> DivisorClass:
        return (-3,) + (1,) * self.n

    @property
    def H(self) -> DivisorClass:
        return self.basis_vector(0)

    def E(self, i: int) -> DivisorClass:
        """The exceptional class E_i, 1-based."""
        if not 1 <= i <= self.n:
            raise InputError(f"E_{i} does not exist on Z^(1,{self.n})")
        return self.basis_vector(i)

    def basis_vector(self, i: int) -> DivisorClass:
        return tuple(int(j == i) for j in range(self.rank))

    @property
    def gram(self) -> IntMatrix:
        return IntMatrix.diagonal([1] + [-1] * self.n)

    @property
    def canonical(self) -> DivisorClass:
        return self.K

    def check(self, d: Sequence[int]) -> DivisorClass:
        if len(d) != self.rank:
            raise InputError(f"class of length {len(d)} on a lattice of rank {self.rank}")
        return tuple(int(x) for x in d)

    def pair(self, d1: Sequence[int], d2: Sequence[int]) -> int:
        d1, d2 = self.check(d1), self.check(d2)
        return d1[0] * d2[0] - sum(a * b for a, b in zip(d1[1:], d2[1:]))

    def square(self, d: Sequence[int]) -> int:
        return self.pair(d, d)

    def degree(self) -> int:
        """K.K = 9 - n."""
        return 9 - self.n

    def orthogonal_complement(self, classes: Iterable[Sequence[int]]) -> list[DivisorClass]:
        """Saturated basis of the classes orthogonal to every given class."""
        g = self.gram
        rows = [g.apply(self.check(c)) for c in classes]
        if not rows:
            return [self.basis_vector(i) for i in range(self.rank)]
        return integer_kernel(IntMatrix(rows))

    def exceptional_classes(self) -> list[DivisorClass]:
        """All D with D.D = -1 and D.K = -1, in lexicographic order."""
        if self.n > 8:
            raise InputError("infinitely many classes for n > 8")
        return list(_enumerate(self.n, 1))

    def root_classes(self) -> list[DivisorClass]:
        """All D with D.D = -2 and D.K = 0, in lexicographic order."""
        if self.n > 8:
            raise InputError("infinitely many classes for n > 8")
        return list(_enumerate(self.n, 2))


def pair(lattice: PicardLattice, d1: Sequence[int], d2: Sequence[int]) -> int:
    return lattice.pair(d1, d2)


def exceptional_classes(lattice: PicardLattice) -> list[DivisorClass]:
    return lattice.exceptional_classes()


def root_classes(lattice: PicardLattice) -> list[DivisorClass]:
    return lattice.root_classes()


@lru_cache(maxsize=None)
def _enumerate(n: int, kind: int) -> tuple[DivisorClass, ...]:
    # Write D = a H - sum b_i E_i.
    #   kind 1 (exceptional): sum b_i = 3a - 1, sum b_i^2 = a^2 + 1
    #   kind 2 (root):        sum b_i = 3a,     sum b_i^2 = a^2 + 2
    # Cauchy-Schwarz (sum b)^2 <= n sum b^2 bounds a.
    if n == 0:
        return ()
    shift, extra = (1, 1) if kind == 1 else (0, 2)
    # (9 - n) a^2 - 6 |a| - n * extra <= 0 is implied, hence:
    a_max = (6 + isqrt(36 + 4 * (9 - n) * n * extra) + 1) // (2 * (9 - n)) + 1
    out = []
    for a in range(-a_max, a_max + 1):
        total, sq = 3 * a - shift, a * a + extra
        if total * total > n * sq:
            continue
        for bs in _vectors(n, total, sq):
            out.append((a,) + tuple(-b for b in bs))
    out.sort()
    return tuple(out)


def _vectors(k: int, total: int, sq: int):
    """Integer vectors of length k with the given sum and sum of squares."""
    if k == 0:
        if total == 0 and sq == 0:
            yield ()
        return
    if total * total > k * sq:
        return
    r = isqrt(sq)
    for b in range(-r, r + 1):
        for rest in _vectors(k - 1, total - b, sq - b * b):
            yield (b,) + rest


@dataclass(frozen=True)
class Sublattice:
    """Sublattice of a Picard lattice given by a basis of classes."""

    ambient: PicardLattice
    basis: tuple[DivisorClass, ...] = field(default=())

    def __post_init__(self):
        basis = tuple(self.ambient.check(b) for b in self.basis)
        object.__setattr__(self, "basis", basis)
        if basis and len(integer_kernel(IntMatrix.from_columns(basis))) != 0:
            raise InputError("sublattice basis is not linearly independent")

    @property
    def rank(self) -> int:
        return len(self.basis)

    def gram(self) -> list[list[int]]:
        return [[self.ambient.pair(a, b) for b in self.basis] for a in self.basis]


def r_invariant(sub: Sublattice) -> int:
    """Positive generator of the ideal of Z generated by ``K.B`` for B in ``sub``."""
    if not sub.basis:
        raise InputError("r-invariant needs a nonempty basis")
    K = sub.ambient.K
    g = 0
    for b in sub.basis:
        g = gcd(g, abs(sub.ambient.pair(K, b)))
    if g == 0:
        raise InputError("K-degenerate sublattice")
    return g
