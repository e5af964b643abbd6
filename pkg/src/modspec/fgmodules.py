"""Finitely generated modules over Z and Z/n in canonical form.

A presented module is normalized to its invariant-factor decomposition
M = Z/e_1 + ... + Z/e_t + Z^r with e_1 | e_2 | ... | e_t (each > 1) via the
Smith normal form of the relation matrix; over Z/n the relations n*g_i are
appended so one normal-form engine serves both rings.  Elements live in the
canonical coordinates; submodules are the sublattices of Z^(t+r) between the
relation lattice and the full lattice, stored as row Hermite normal forms,
so structural equality is submodule equality.

The Pruefer group Z(p^oo) is carried as a special module kind with symbolic
rules (divisible, torsion, zero annihilator): it is not finitely presented,
and only the operations its role as a counterexample needs are defined.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Iterator, Sequence

from .arith import ZZ, Ideal, Ring, ideal, is_prime, prime_divisors
from .lattices import (
    Basis,
    hnf,
    lattice_contains,
    lattice_index,
    lattice_intersection,
    lattice_leq,
    lattice_sum,
    smith_column_orders,
    smith_diagonal,
)

DEFAULT_CARDINALITY_CAP = 4096
DEFAULT_SUBGROUP_CAP = 512


class CapExceededError(RuntimeError):
    """An enumeration would exceed the configured cardinality cap."""


class UnsupportedModuleError(ValueError):
    """The operation is not defined for this module kind."""


@dataclass(frozen=True)
class FgModule:
    ring: Ring
    factors: tuple[int, ...] = ()
    free_rank: int = 0
    prufer_prime: int | None = None

    def __post_init__(self):
        if self.ring.is_localized:
            raise ValueError("modules are presented over the base rings Z and Z/n")
        if self.prufer_prime is not None:
            if self.ring != ZZ:
                raise ValueError("the Pruefer group is a Z-module")
            if not is_prime(self.prufer_prime):
                raise ValueError(f"{self.prufer_prime} is not prime")
            if self.factors or self.free_rank:
                raise ValueError("Pruefer modules carry no canonical factors")
            return
        if self.free_rank < 0:
            raise ValueError("free rank must be nonnegative")
        n = self.ring.modulus
        for a, b in zip(self.factors, self.factors[1:]):
            if b % a:
                raise ValueError(f"invariant factors must form a divisibility chain: {self.factors}")
        for e in self.factors:
            if e < 2:
                raise ValueError("invariant factors are > 1")
            if n is not None and n % e:
                raise ValueError(f"factor {e} does not divide the modulus {n}")
        if n is not None and self.free_rank:
            raise ValueError("modules over Z/n are torsion")

    # -- classification ----------------------------------------------------

    @property
    def is_prufer(self) -> bool:
        return self.prufer_prime is not None

    @property
    def is_finite(self) -> bool:
        return not self.is_prufer and self.free_rank == 0

    @property
    def is_zero(self) -> bool:
        return self.is_finite and not self.factors

    @property
    def cardinality(self) -> int | None:
        return math.prod(self.factors) if self.is_finite else None

    @property
    def rank(self) -> int:
        """Number of canonical coordinates."""
        if self.is_prufer:
            raise UnsupportedModuleError("the Pruefer group has no canonical coordinates")
        return len(self.factors) + self.free_rank

    def annihilator(self) -> Ideal:
        if self.is_prufer or self.free_rank:
            return ideal(self.ring, 0)
        if not self.factors:
            return ideal(self.ring, 1)
        return ideal(self.ring, self.factors[-1])

    @property
    def exponent(self) -> int:
        if not self.is_finite:
            raise UnsupportedModuleError("infinite module")
        return self.factors[-1] if self.factors else 1

    def relevant_primes(self) -> tuple[int, ...]:
        """Primes p with (p) containing the annihilator; finite modules only."""
        if not self.is_finite:
            raise UnsupportedModuleError("the relevant prime set is infinite")
        return prime_divisors(self.exponent)

    # -- elements -----------------------------------------------------------

    def reduce_coords(self, coords: Sequence[int]) -> tuple[int, ...]:
        if len(coords) != self.rank:
            raise ValueError(f"expected {self.rank} coordinates, got {len(coords)}")
        out = []
        for i, c in enumerate(coords):
            c = int(c)
            out.append(c % self.factors[i] if i < len(self.factors) else c)
        return tuple(out)

    def element(self, coords: Sequence[int]) -> ModElement:
        return ModElement(self, self.reduce_coords(coords))

    def zero_element(self) -> ModElement:
        return self.element([0] * self.rank)

    def generator(self, i: int) -> ModElement:
        coords = [0] * self.rank
        coords[i] = 1
        return self.element(coords)

    def generators(self) -> tuple[ModElement, ...]:
        return tuple(self.generator(i) for i in range(self.rank))

    def elements(self, cap: int = DEFAULT_CARDINALITY_CAP) -> Iterator[ModElement]:
        card = self.cardinality
        if card is None:
            raise UnsupportedModuleError("cannot enumerate an infinite module")
        if card > cap:
            raise CapExceededError(f"|M| = {card} exceeds the cardinality cap {cap}")
        for coords in itertools.product(*(range(e) for e in self.factors)):
            yield ModElement(self, coords)

    def prufer_element(self, numerator: int, exponent: int) -> PruferElement:
        if not self.is_prufer:
            raise UnsupportedModuleError("not a Pruefer module")
        p = self.prufer_prime
        value = Fraction(numerator, p**exponent) % 1
        return PruferElement(self, value)

    # -- canonical lattice data ----------------------------------------------

    def relation_rows(self) -> Basis:
        d = self.rank
        rows = []
        for i, e in enumerate(self.factors):
            row = [0] * d
            row[i] = e
            rows.append(tuple(row))
        return tuple(rows)

    def zero_submodule(self) -> Submodule:
        if self.is_prufer:
            return Submodule(self, None, "zero")
        return Submodule(self, hnf(self.relation_rows(), self.rank))

    def full_submodule(self) -> Submodule:
        if self.is_prufer:
            return Submodule(self, None, "full")
        d = self.rank
        rows = tuple(tuple(1 if i == j else 0 for j in range(d)) for i in range(d))
        return Submodule(self, rows)

    def submodule(self, gens: Iterable[ModElement]) -> Submodule:
        return submodule_from_generators(self, list(gens))

    def __str__(self) -> str:
        if self.is_prufer:
            return f"Z({self.prufer_prime}^oo)"
        parts = [f"Z/{e}" for e in self.factors] + ["Z"] * self.free_rank
        body = " + ".join(parts) if parts else "0"
        return f"{body} over {self.ring}"


@dataclass(frozen=True)
class ModElement:
    parent: FgModule
    coords: tuple[int, ...]

    def __add__(self, other: ModElement) -> ModElement:
        if self.parent != other.parent:
            raise ValueError("elements of different modules")
        return self.parent.element([a + b for a, b in zip(self.coords, other.coords)])

    def __neg__(self) -> ModElement:
        return self.parent.element([-a for a in self.coords])

    def __sub__(self, other: ModElement) -> ModElement:
        return self + (-other)

    def scale(self, r: int) -> ModElement:
        return self.parent.element([r * a for a in self.coords])

    def __rmul__(self, r: int) -> ModElement:
        return self.scale(r)

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def order(self) -> int | None:
        """Additive order; None when infinite."""
        t = len(self.parent.factors)
        if any(self.coords[t:]):
            return None
        out = 1
        for e, c in zip(self.parent.factors, self.coords):
            out = math.lcm(out, e // math.gcd(e, c))
        return out


@dataclass(frozen=True)
class PruferElement:
    parent: FgModule
    value: Fraction  # in [0, 1), denominator a power of p

    def __add__(self, other: PruferElement) -> PruferElement:
        if self.parent != other.parent:
            raise ValueError("elements of different modules")
        return PruferElement(self.parent, (self.value + other.value) % 1)

    def __neg__(self) -> PruferElement:
        return PruferElement(self.parent, (-self.value) % 1)

    def __sub__(self, other: PruferElement) -> PruferElement:
        return self + (-other)

    def scale(self, r: int) -> PruferElement:
        return PruferElement(self.parent, (r * self.value) % 1)

    def __rmul__(self, r: int) -> PruferElement:
        return self.scale(r)

    @property
    def is_zero(self) -> bool:
        return self.value == 0


@dataclass(frozen=True)
class Submodule:
    """Submodule in canonical form.

    For presented parents, ``basis`` is the row HNF of the preimage lattice
    in Z^rank (always containing the relation lattice).  Pruefer parents only
    admit the symbolic submodules "full" and "zero".
    """

    parent: FgModule
    basis: Basis | None
    symbolic: str | None = None

    def __post_init__(self):
        if self.parent.is_prufer:
            if self.symbolic not in ("full", "zero") or self.basis is not None:
                raise UnsupportedModuleError(
                    "submodules of the Pruefer group are symbolic (full or zero)"
                )
        elif self.basis is None or self.symbolic is not None:
            raise ValueError("presented submodules carry a lattice basis")

    @property
    def is_full(self) -> bool:
        if self.parent.is_prufer:
            return self.symbolic == "full"
        d = self.parent.rank
        return len(self.basis) == d and all(
            self.basis[i][i] == 1 for i in range(d)
        )

    @property
    def is_zero(self) -> bool:
        if self.parent.is_prufer:
            return self.symbolic == "zero"
        return self.basis == self.parent.zero_submodule().basis

    def contains(self, elem) -> bool:
        if self.parent.is_prufer:
            return True if self.symbolic == "full" else elem.is_zero
        if elem.parent != self.parent:
            raise ValueError("element of a different module")
        return lattice_contains(self.basis, elem.coords)

    def __le__(self, other: Submodule) -> bool:
        if self.parent != other.parent:
            raise ValueError("submodules of different modules")
        if self.parent.is_prufer:
            return self.symbolic == "zero" or other.symbolic == "full"
        return lattice_leq(self.basis, other.basis)

    def __lt__(self, other: Submodule) -> bool:
        return self != other and self <= other

    def index(self) -> int | None:
        """|M / N| = [Z^rank : L], or None when infinite."""
        if self.parent.is_prufer:
            raise UnsupportedModuleError("symbolic submodule")
        return lattice_index(self.basis, self.parent.rank)

    def order(self) -> int | None:
        """Cardinality as a subgroup; None when infinite."""
        card = self.parent.cardinality
        idx = self.index()
        if card is None or idx is None:
            return None
        return card // idx

    def add(self, other: Submodule) -> Submodule:
        if self.parent != other.parent:
            raise ValueError("submodules of different modules")
        if self.parent.is_prufer:
            sym = "full" if "full" in (self.symbolic, other.symbolic) else "zero"
            return Submodule(self.parent, None, sym)
        return Submodule(self.parent, lattice_sum(self.basis, other.basis, self.parent.rank))

    def intersect(self, other: Submodule) -> Submodule:
        if self.parent != other.parent:
            raise ValueError("submodules of different modules")
        if self.parent.is_prufer:
            sym = "zero" if "zero" in (self.symbolic, other.symbolic) else "full"
            return Submodule(self.parent, None, sym)
        return Submodule(
            self.parent, lattice_intersection(self.basis, other.basis, self.parent.rank)
        )

    def elements(self, cap: int = DEFAULT_CARDINALITY_CAP) -> Iterator[ModElement]:
        for elem in self.parent.elements(cap):
            if self.contains(elem):
                yield elem

    def generators(self) -> tuple[ModElement, ...]:
        return tuple(self.parent.element(row) for row in self.basis)

    def __str__(self) -> str:
        if self.parent.is_prufer:
            return self.symbolic
        return f"<{', '.join(str(list(r)) for r in self.basis)}>"


# ---------------------------------------------------------------------------
# construction and normalization
# ---------------------------------------------------------------------------

def normalize(ring: Ring, generators: int, relations: Iterable[Sequence[int]]) -> FgModule:
    """Canonical form of the cokernel of a relation matrix.

    Each relation is a length-``generators`` integer vector; over Z/n the
    relations n*g_i are implicit.  Unit factors are dropped; an empty
    presentation yields a free module and all-unit relations the zero module.
    """
    module, _ = _normalize_with_coordmap(ring, generators, relations)
    return module


def _normalize_with_coordmap(
    ring: Ring, generators: int, relations: Iterable[Sequence[int]]
) -> tuple[FgModule, tuple[tuple[int, ...], ...]]:
    if ring.is_localized:
        raise ValueError("modules are presented over the base rings Z and Z/n")
    if generators < 0:
        raise ValueError("generator count must be nonnegative")
    rows = [tuple(int(x) for x in row) for row in relations]
    for row in rows:
        if len(row) != generators:
            raise ValueError(f"relation length {len(row)} does not match generators={generators}")
    if ring.modulus is not None:
        rows.extend(
            tuple(ring.modulus if i == j else 0 for j in range(generators))
            for i in range(generators)
        )
    orders, V = smith_column_orders(rows, generators)
    keep = [j for j in range(generators) if orders[j] != 1]
    factors = tuple(o for o in orders if o > 1)
    free_rank = sum(1 for o in orders if o == 0)
    module = FgModule(ring, factors, free_rank)
    # rows of V are the canonical coordinates of the original generators
    coordmap = tuple(tuple(V[i][j] for j in keep) for i in range(generators))
    return module, coordmap


def from_cyclic_orders(ring: Ring, orders: Sequence[int], free_rank: int = 0) -> FgModule:
    """Module with one cyclic summand per listed order, normalized."""
    k = len(orders) + free_rank
    rows = []
    for i, e in enumerate(orders):
        row = [0] * k
        row[i] = int(e)
        rows.append(row)
    return normalize(ring, k, rows)


def prufer_module(p: int) -> FgModule:
    return FgModule(ZZ, prufer_prime=p)


def zero_module(ring: Ring) -> FgModule:
    return FgModule(ring)


def submodule_from_generators(module: FgModule, gens: Sequence[ModElement]) -> Submodule:
    if module.is_prufer:
        raise UnsupportedModuleError(
            "submodules of the Pruefer group are handled symbolically"
        )
    rows = list(module.relation_rows())
    for g in gens:
        if g.parent != module:
            raise ValueError("generator from a different module")
        rows.append(g.coords)
    return Submodule(module, hnf(rows, module.rank))


def submodule_from_lattice(module: FgModule, rows: Iterable[Sequence[int]]) -> Submodule:
    full = list(module.relation_rows()) + [tuple(int(x) for x in r) for r in rows]
    return Submodule(module, hnf(full, module.rank))


def scalar_multiple_submodule(f: int, module: FgModule) -> Submodule:
    """The submodule f*M."""
    if module.is_prufer:
        return Submodule(module, None, "full" if f != 0 else "zero")
    return submodule_from_generators(
        module, [g.scale(f) for g in module.generators()]
    )


# ---------------------------------------------------------------------------
# colon ideals and annihilators
# ---------------------------------------------------------------------------

def colon(sub: Submodule, module: FgModule | None = None) -> Ideal:
    """(N : M) = Ann(M/N), via the Smith form of N's lattice basis."""
    module = module or sub.parent
    if sub.parent != module:
        raise ValueError("submodule of a different module")
    if module.is_prufer:
        # fM = M for f != 0, so only the two symbolic cases occur
        return ideal(module.ring, 1 if sub.symbolic == "full" else 0)
    d = module.rank
    if d == 0:
        return ideal(module.ring, 1)
    diag = smith_diagonal(sub.basis, d)
    if len(diag) < d:
        return ideal(module.ring, 0)
    return ideal(module.ring, diag[-1])


def annihilator(module: FgModule) -> Ideal:
    return module.annihilator()


# ---------------------------------------------------------------------------
# direct sums and isomorphism classes
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearMap:
    """Linear map into a presented module, rows = images of basis vectors."""

    source: FgModule
    target: FgModule
    rows: tuple[tuple[int, ...], ...]

    def apply(self, elem: ModElement) -> ModElement:
        if elem.parent != self.source:
            raise ValueError("element of a different module")
        d = self.target.rank
        out = [0] * d
        for c, row in zip(elem.coords, self.rows):
            for j in range(d):
                out[j] += c * row[j]
        return self.target.element(out)

    def apply_submodule(self, sub: Submodule) -> Submodule:
        gens = [self.apply(self.source.element(row)) for row in sub.basis]
        return submodule_from_generators(self.target, gens)


def direct_sum_with_embeddings(m1: FgModule, m2: FgModule) -> tuple[FgModule, LinearMap, LinearMap]:
    if m1.ring != m2.ring:
        raise ValueError("direct sum over different rings")
    if m1.is_prufer or m2.is_prufer:
        raise UnsupportedModuleError("direct sums are defined for presented modules")
    d1, d2 = m1.rank, m2.rank
    k = d1 + d2
    rows = []
    for i, e in enumerate(m1.factors):
        row = [0] * k
        row[i] = e
        rows.append(row)
    for i, e in enumerate(m2.factors):
        row = [0] * k
        row[d1 + i] = e
        rows.append(row)
    module, coordmap = _normalize_with_coordmap(m1.ring, k, rows)
    emb1 = LinearMap(m1, module, coordmap[:d1])
    emb2 = LinearMap(m2, module, coordmap[d1:])
    return module, emb1, emb2


def direct_sum(m1: FgModule, m2: FgModule) -> FgModule:
    return direct_sum_with_embeddings(m1, m2)[0]


def iso_class_equal(m1, m2) -> bool:
    """Isomorphism of the underlying modules over the common base ring.

    Invariant factors, free rank and the special kind are a complete
    isomorphism invariant for the representable classes.  Accepts FgModule
    and LocalizedModule values (the latter compare their invariant data as
    modules over the original base ring).
    """
    return _iso_invariants(m1) == _iso_invariants(m2)


def _iso_invariants(m) -> tuple:
    if isinstance(m, FgModule):
        return (m.ring, m.prufer_prime, m.factors, m.free_rank)
    inv = getattr(m, "iso_invariants", None)
    if inv is None:
        raise TypeError(f"cannot compare {type(m).__name__}")
    return inv


# ---------------------------------------------------------------------------
# subgroup enumeration
# ---------------------------------------------------------------------------

def all_submodules(
    module: FgModule, cap: int = DEFAULT_SUBGROUP_CAP
) -> Iterator[Submodule]:
    """Every submodule of a finite module, each in canonical HNF form.

    Enumerates upper-triangular candidate bases (pivots dividing the
    invariant factors, entries above each pivot reduced) and keeps those
    containing the relation lattice; this hits every intermediate lattice
    exactly once.
    """
    if not module.is_finite:
        raise UnsupportedModuleError("subgroup enumeration needs a finite module")
    card = module.cardinality
    if card > cap:
        raise CapExceededError(f"|M| = {card} exceeds the enumeration cap {cap}")
    d = module.rank
    if d == 0:
        yield module.full_submodule()
        return
    factors = module.factors
    rel = module.relation_rows()
    divisor_lists = [[a for a in range(1, e + 1) if e % a == 0] for e in factors]
    for diag in itertools.product(*divisor_lists):
        above_ranges = []
        for j in range(d):
            above_ranges.extend([range(diag[j])] * j)
        for above in itertools.product(*above_ranges):
            rows = []
            pos = 0
            entries = list(above)
            # column j supplies entries for rows 0..j-1
            cols = [[0] * d for _ in range(d)]
            for j in range(d):
                for i in range(j):
                    cols[j][i] = entries[pos]
                    pos += 1
                cols[j][j] = diag[j]
            basis = tuple(tuple(cols[j][i] for j in range(d)) for i in range(d))
            if lattice_leq(rel, basis):
                yield Submodule(module, basis)
