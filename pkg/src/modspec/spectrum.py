"""Prime submodules, the Zariski topology on Spec(M), and prime radicals.

A proper submodule P is prime when a*m in P forces m in P or a*M <= P; its
characteristic ideal is the prime (P:M).  For a finite module the spectrum
is graded into fibers over the primes p dividing the annihilator generator,
and two enumeration strategies are provided: definitional brute force over
all subgroups, and the classified fast path P is (p)-prime iff
p*M <= P < M, which walks the proper subspaces of the vector space M/pM.
The two must agree; "both" enforces that.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache, reduce
from typing import Iterator

from .arith import Ideal, ideal, ideal_radical, is_prime_ideal
from .fgmodules import (
    DEFAULT_CARDINALITY_CAP,
    DEFAULT_SUBGROUP_CAP,
    CapExceededError,
    FgModule,
    Submodule,
    UnsupportedModuleError,
    all_submodules,
    colon,
    scalar_multiple_submodule,
    submodule_from_lattice,
)
from .lattices import lattice_contains


class PropertyViolation(RuntimeError):
    """A verified identity failed on a concrete instance."""


class StrategyMismatchError(PropertyViolation):
    """The two spectrum enumeration strategies disagreed."""


@dataclass(frozen=True)
class PrimeSubmodule:
    sub: Submodule
    char_ideal: Ideal

    def __post_init__(self):
        if not is_prime_ideal(self.char_ideal):
            raise ValueError(f"characteristic ideal {self.char_ideal} is not prime")

    @property
    def char_prime(self) -> int:
        return self.char_ideal.gen


@dataclass(frozen=True)
class Spectrum:
    """Spec(M) grouped into fibers over the relevant primes."""

    module: FgModule
    fibers: tuple[tuple[int, tuple[PrimeSubmodule, ...]], ...]

    def __hash__(self) -> int:
        # shallow but consistent: the fiber content is determined by the module
        return hash((self.module, tuple(p for p, _ in self.fibers)))

    @property
    def fiber_primes(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.fibers)

    def fiber(self, p: int) -> tuple[PrimeSubmodule, ...]:
        for q, primes in self.fibers:
            if q == p:
                return primes
        return ()

    def primes(self) -> Iterator[PrimeSubmodule]:
        for _, chunk in self.fibers:
            yield from chunk

    def __len__(self) -> int:
        return sum(len(chunk) for _, chunk in self.fibers)

    @property
    def is_empty(self) -> bool:
        return len(self) == 0

    def open_set(self, primes) -> OpenSet:
        primes = frozenset(primes)
        if not primes <= self.fiber_primes:
            raise ValueError(f"{sorted(primes)} is not a set of fibers of this spectrum")
        return OpenSet(self, primes)

    def full_open(self) -> OpenSet:
        return OpenSet(self, self.fiber_primes)

    def empty_open(self) -> OpenSet:
        return OpenSet(self, frozenset())


@dataclass(frozen=True)
class OpenSet:
    """Zariski-open subset of Spec(M): a union of whole fibers."""

    spectrum: Spectrum
    fiber_primes: frozenset[int]

    def __hash__(self) -> int:
        return hash((self.spectrum.module, self.fiber_primes))

    def __post_init__(self):
        if not self.fiber_primes <= self.spectrum.fiber_primes:
            raise ValueError("open set holds primes outside the spectrum")

    def points(self) -> Iterator[PrimeSubmodule]:
        for p in sorted(self.fiber_primes):
            yield from self.spectrum.fiber(p)

    def __or__(self, other: OpenSet) -> OpenSet:
        self._check(other)
        return OpenSet(self.spectrum, self.fiber_primes | other.fiber_primes)

    def __and__(self, other: OpenSet) -> OpenSet:
        self._check(other)
        return OpenSet(self.spectrum, self.fiber_primes & other.fiber_primes)

    def issubset(self, other: OpenSet) -> bool:
        self._check(other)
        return self.fiber_primes <= other.fiber_primes

    def _check(self, other: OpenSet) -> None:
        if self.spectrum != other.spectrum:
            raise ValueError("open sets over different spectra")

    @property
    def is_empty(self) -> bool:
        return not self.fiber_primes

    def complement(self) -> ClosedSet:
        return ClosedSet(self.spectrum, self.spectrum.fiber_primes - self.fiber_primes)


@dataclass(frozen=True)
class ClosedSet:
    """Variety V(N), stored by its fiber set; carries sqrt((N:M)) when built
    from a submodule (informational, excluded from equality)."""

    spectrum: Spectrum
    fiber_primes: frozenset[int]
    defining_ideal: Ideal | None = field(default=None, compare=False)

    def complement(self) -> OpenSet:
        return OpenSet(self.spectrum, self.spectrum.fiber_primes - self.fiber_primes)

    @property
    def is_empty(self) -> bool:
        return not self.fiber_primes


# ---------------------------------------------------------------------------
# prime testing and enumeration
# ---------------------------------------------------------------------------

def is_prime_submodule(
    sub: Submodule,
    module: FgModule | None = None,
    cap: int = DEFAULT_CARDINALITY_CAP,
) -> Ideal | None:
    """Definitional brute-force prime test; the characteristic ideal on
    success, None otherwise."""
    module = module if module is not None else sub.parent
    if sub.parent != module:
        raise ValueError("submodule of a different module")
    if not module.is_finite:
        raise UnsupportedModuleError("the brute-force prime test needs a finite module")
    if sub.is_full:
        return None
    factors = module.factors
    if module.cardinality > cap:
        raise CapExceededError(f"|M| = {module.cardinality} exceeds the cardinality cap {cap}")
    coords_all = list(itertools.product(*(range(e) for e in factors)))
    member = frozenset(c for c in coords_all if lattice_contains(sub.basis, c))

    def scaled(a, c):
        return tuple((a * x) % e for x, e in zip(c, factors))

    gens = [tuple(1 if j == i else 0 for j in range(len(factors))) for i in range(len(factors))]
    for a in range(module.exponent):
        if all(scaled(a, g) in member for g in gens):
            continue  # a*M <= P, condition vacuous for this a
        for c in coords_all:
            if scaled(a, c) in member and c not in member:
                return None
    return colon(sub, module)


def _subspace_bases(p: int, s: int) -> Iterator[tuple[tuple[int, ...], ...]]:
    """All subspaces of F_p^s, one reduced-row-echelon basis each."""
    for k in range(s + 1):
        for pivots in itertools.combinations(range(s), k):
            free_pos = [
                (i, c)
                for i in range(k)
                for c in range(pivots[i] + 1, s)
                if c not in pivots
            ]
            for values in itertools.product(range(p), repeat=len(free_pos)):
                rows = [[0] * s for _ in range(k)]
                for i, col in enumerate(pivots):
                    rows[i][col] = 1
                for (i, c), v in zip(free_pos, values):
                    rows[i][c] = v
                yield tuple(tuple(r) for r in rows)


def _fiber_classified(module: FgModule, p: int) -> list[PrimeSubmodule]:
    # primes with characteristic ideal (p) are the pullbacks of the proper
    # subspaces of M/pM
    d = module.rank
    torsion_idx = [i for i, e in enumerate(module.factors) if e % p == 0]
    s = len(torsion_idx)
    p_rows = [tuple(p if j == i else 0 for j in range(d)) for i in range(d)]
    out = []
    for basis in _subspace_bases(p, s):
        if len(basis) == s:
            continue  # the full subspace pulls back to M itself
        rows = list(p_rows)
        for w in basis:
            vec = [0] * d
            for pos, val in zip(torsion_idx, w):
                vec[pos] = val
            rows.append(tuple(vec))
        sub = submodule_from_lattice(module, rows)
        out.append(PrimeSubmodule(sub, ideal(module.ring, p)))
    return out


def _enumerate_bruteforce(module: FgModule, subgroup_cap: int, card_cap: int):
    out = []
    for sub in all_submodules(module, subgroup_cap):
        char = is_prime_submodule(sub, module, card_cap)
        if char is not None:
            out.append(PrimeSubmodule(sub, char))
    return out


@lru_cache(maxsize=512)
def spec_enumerate(
    module: FgModule,
    strategy: str = "classified",
    subgroup_cap: int = DEFAULT_SUBGROUP_CAP,
    card_cap: int = DEFAULT_CARDINALITY_CAP,
) -> Spectrum:
    """Spec(M) by fibers.  Strategies: "bruteforce" (definitional filter of
    all subgroups), "classified" (proper subspaces of M/pM per relevant
    prime p), or "both" (run the two and insist they agree)."""
    if module.is_prufer or module.is_zero:
        return Spectrum(module, ())
    if not module.is_finite:
        raise UnsupportedModuleError("spectrum enumeration needs a finite module")
    if strategy not in ("bruteforce", "classified", "both"):
        raise ValueError(f"unknown strategy {strategy!r}")

    primes_by_fiber: dict[int, list[PrimeSubmodule]] = {}
    if strategy in ("classified", "both"):
        for p in module.relevant_primes():
            primes_by_fiber[p] = _fiber_classified(module, p)
    if strategy in ("bruteforce", "both"):
        brute = _enumerate_bruteforce(module, subgroup_cap, card_cap)
        if strategy == "both":
            classified_set = {
                (p, ps.sub) for p, chunk in primes_by_fiber.items() for ps in chunk
            }
            brute_set = {(ps.char_prime, ps.sub) for ps in brute}
            if classified_set != brute_set:
                raise StrategyMismatchError(
                    f"spectrum strategies disagree on {module}: "
                    f"classified={len(classified_set)} bruteforce={len(brute_set)}"
                )
        else:
            for ps in brute:
                primes_by_fiber.setdefault(ps.char_prime, []).append(ps)

    fibers = tuple(
        (p, tuple(sorted(chunk, key=lambda ps: ps.sub.basis)))
        for p, chunk in sorted(primes_by_fiber.items())
        if chunk
    )
    return Spectrum(module, fibers)


# ---------------------------------------------------------------------------
# topology
# ---------------------------------------------------------------------------

def variety(
    sub: Submodule, module: FgModule | None = None, spectrum: Spectrum | None = None
) -> ClosedSet:
    """V(N): the fibers (p) with (N:M) <= (p)."""
    module = module if module is not None else sub.parent
    spectrum = spectrum if spectrum is not None else spec_enumerate(module)
    c = colon(sub, module)
    primes = frozenset(
        p for p in spectrum.fiber_primes if ideal(module.ring, p).contains_ideal(c)
    )
    return ClosedSet(spectrum, primes, ideal_radical(c))


def basic_open(
    f: int, module: FgModule, spectrum: Spectrum | None = None
) -> OpenSet:
    """D(fM): complement of V(fM)."""
    spectrum = spectrum if spectrum is not None else spec_enumerate(module)
    return variety(scalar_multiple_submodule(f, module), module, spectrum).complement()


# ---------------------------------------------------------------------------
# prime radicals and the prime radical condition
# ---------------------------------------------------------------------------

def prime_radical(
    sub: Submodule, module: FgModule | None = None, method: str = "closed_form"
) -> Submodule:
    """Intersection of the primes containing N; M itself when none exist.

    Two implementations: "bruteforce" intersects over the enumerated
    spectrum; "closed_form" evaluates the finite intersection of the
    N + pM over the relevant primes p with N + pM proper.  "both" runs
    the two and insists they agree.
    """
    module = module if module is not None else sub.parent
    if module.is_prufer:
        return module.full_submodule()  # primeless: empty intersection
    if not module.is_finite:
        raise UnsupportedModuleError("prime radicals need an enumerable spectrum")
    if method == "both":
        closed = prime_radical(sub, module, "closed_form")
        brute = prime_radical(sub, module, "bruteforce")
        if closed != brute:
            raise PropertyViolation(
                f"prime radical implementations disagree on {module}"
            )
        return closed
    if method == "closed_form":
        terms = []
        for p in module.relevant_primes():
            t = sub.add(scalar_multiple_submodule(p, module))
            if not t.is_full:
                terms.append(t)
        if not terms:
            return module.full_submodule()
        return reduce(lambda a, b: a.intersect(b), terms)
    if method == "bruteforce":
        spectrum = spec_enumerate(module)
        containing = [ps.sub for ps in spectrum.primes() if sub <= ps.sub]
        if not containing:
            return module.full_submodule()
        return reduce(lambda a, b: a.intersect(b), containing)
    raise ValueError(f"unknown method {method!r}")


@dataclass(frozen=True)
class PradicalCertificate:
    """Witness for a failing prime radical condition: the offending prime
    and both sides of (sqrt[p](PM) : M) = P."""

    prime_ideal: Ideal
    lhs: Ideal
    rhs: Ideal


@dataclass(frozen=True)
class PradicalResult:
    holds: bool
    certificate: PradicalCertificate | None = None
    note: str = ""

    def __bool__(self) -> bool:
        return self.holds


def is_pradical(module: FgModule) -> PradicalResult:
    """Does (sqrt[p](PM) : M) = P hold for every prime ideal P >= Ann(M)?

    Finite modules are checked prime by prime over the finite relevant set.
    Free rank over Z is answered symbolically: (PM:M) = P and sqrt[p](PM) =
    PM for every prime P, with the zero ideal witnessed by the torsion
    submodule.  The Pruefer group fails with an explicit certificate.
    """
    ring = module.ring
    if module.is_zero:
        return PradicalResult(True, note="zero module: no prime examined fails")
    if module.is_prufer:
        p = module.prufer_prime
        # primeless: sqrt[p](pM) = sqrt[p](M) = M and (M:M) = (1) != (p)
        return PradicalResult(
            False,
            PradicalCertificate(ideal(ring, p), ideal(ring, 1), ideal(ring, p)),
            note="the Pruefer group is primeless",
        )
    if module.free_rank > 0:
        return PradicalResult(
            True,
            note=(
                "free rank > 0: (PM:M) = P with sqrt[p](PM) = PM for every "
                "prime P, and the torsion submodule witnesses P = (0)"
            ),
        )
    for p in module.relevant_primes():
        pm = scalar_multiple_submodule(p, module)
        rad = prime_radical(pm, module, "closed_form")
        lhs = colon(rad, module)
        rhs = ideal(ring, p)
        if lhs != rhs:
            return PradicalResult(False, PradicalCertificate(rhs, lhs, rhs))
    return PradicalResult(True)


# ---------------------------------------------------------------------------
# the natural map into Spec(R / Ann M)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class NaturalMapResult:
    """psi: Spec(M) -> Spec(R/Ann M), P -> (P:M); primeful iff surjective."""

    module: FgModule
    assignments: tuple[tuple[PrimeSubmodule, Ideal], ...]
    codomain_primes: tuple[int, ...] | None  # None marks an infinite codomain
    surjective: bool
    note: str = ""


def natural_map(module: FgModule) -> NaturalMapResult:
    if module.is_zero:
        return NaturalMapResult(
            module, (), (), True, note="zero module is primeful by convention"
        )
    if module.is_prufer:
        return NaturalMapResult(
            module,
            (),
            None,
            False,
            note="empty spectrum cannot cover Spec(Z/Ann) = Spec(Z)",
        )
    if not module.is_finite:
        raise UnsupportedModuleError("the natural map is enumerated for finite modules")
    spectrum = spec_enumerate(module)
    assignments = tuple((ps, ps.char_ideal) for ps in spectrum.primes())
    codomain = module.relevant_primes()
    hit = {ps.char_prime for ps in spectrum.primes()}
    return NaturalMapResult(module, assignments, codomain, hit == set(codomain))
