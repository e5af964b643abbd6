"""Verification suites: every acceptance-grade property check, exact.

Each suite walks the deterministic corpus (or a caller-supplied module
list), evaluates one family of identities with tolerance zero, and reports
counterexamples instead of raising, so a front end can aggregate.  The
randomized suites draw from a fixed seed; identical invocations produce
identical reports.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Callable, Sequence

from .arith import ZZ, Zmod, ideal, ideal_combine, ideal_radical
from .corpus import finite_corpus, full_corpus, prufer_corpus
from .fgmodules import (
    FgModule,
    all_submodules,
    colon,
    direct_sum_with_embeddings,
    iso_class_equal,
    scalar_multiple_submodule,
    submodule_from_generators,
)
from .localization import (
    CorrespondenceError,
    MultSet,
    localize,
    localize_bruteforce,
    prime_correspondence,
    verify_localization_transfer,
)
from .sheaf import cover_decompose, iso_criterion, psi_map, sections, sheaf_axioms_check, stalk
from .spectrum import (
    PropertyViolation,
    basic_open,
    is_pradical,
    is_prime_submodule,
    natural_map,
    prime_radical,
    spec_enumerate,
    variety,
)

DEFAULT_SEED = 20260810


@dataclass(frozen=True)
class SuiteResult:
    suite: str
    description: str
    checks: int
    failures: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.failures


def _modules(modules: Sequence[FgModule] | None, *, finite_only=False, include_prufer=True):
    if modules is None:
        modules = finite_corpus() if finite_only else full_corpus()
    out = []
    for m in modules:
        if m.is_prufer and (finite_only or not include_prufer):
            continue
        if not m.is_finite and not m.is_prufer:
            continue
        out.append(m)
    return out


def _scalar_bound(module: FgModule) -> int:
    """f ranges over 0..L with L one past the largest relevant prime."""
    primes = module.relevant_primes() if module.is_finite else (module.prufer_prime,)
    return (max(primes) if primes else 1) + 1


def _mult_sets(module: FgModule) -> list[MultSet]:
    out = [MultSet.powers_of(f) for f in range(0, _scalar_bound(module) + 1)]
    if module.is_finite and not module.is_zero:
        out += [MultSet.complement_of_prime(p) for p in module.relevant_primes()]
    return out


# -- criterion 1 -------------------------------------------------------------

def check_artinian_pradical(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Every module over an Artinian base ring Z/n satisfies the prime
    radical condition."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        if m.ring.modulus is None:
            continue
        checks += 1
        res = is_pradical(m)
        if not res.holds:
            failures.append(f"{m}: certificate {res.certificate}")
    return SuiteResult(
        "artinian-pradical",
        "modules over Z/n satisfy the prime radical condition",
        checks,
        tuple(failures),
    )


# -- criterion 2 -------------------------------------------------------------

def check_strategy_agreement(
    modules: Sequence[FgModule] | None = None, max_card: int = 128
) -> SuiteResult:
    """Brute-force and classified spectrum enumeration agree as
    fiber-labeled sets."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        if m.cardinality > max_card:
            continue
        checks += 1
        try:
            spec_enumerate(m, "both")
        except PropertyViolation as exc:
            failures.append(str(exc))
    return SuiteResult(
        "strategy-oracle",
        f"spectrum strategies agree on finite modules with |M| <= {max_card}",
        checks,
        tuple(failures),
    )


# -- criterion 3 -------------------------------------------------------------

def check_prime_radical_oracle(
    modules: Sequence[FgModule] | None = None, max_card: int = 64
) -> SuiteResult:
    """Closed-form prime radical equals the brute-force intersection for
    every submodule."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        if m.cardinality > max_card:
            continue
        for sub in all_submodules(m):
            checks += 1
            closed = prime_radical(sub, m, "closed_form")
            brute = prime_radical(sub, m, "bruteforce")
            if closed != brute:
                failures.append(f"{m}: N = {sub} closed {closed} vs brute {brute}")
    return SuiteResult(
        "prime-radical-oracle",
        f"closed form radical = spectrum intersection, |M| <= {max_card}",
        checks,
        tuple(failures),
    )


# -- criterion 4 -------------------------------------------------------------

def check_stalks(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """The stalk at every prime is the localization at its characteristic
    ideal, via the explicit evaluation bijection."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        for ps in spec_enumerate(m).primes():
            checks += 1
            res = stalk(m, ps)
            expected = localize(m, MultSet.complement_of_prime(ps.char_prime))
            if not res.bijective:
                failures.append(f"{m}: evaluation not bijective at {ps.sub}")
            elif not iso_class_equal(res.localized, expected):
                failures.append(f"{m}: stalk mismatch at {ps.sub}")
    return SuiteResult(
        "stalks",
        "stalk at P is isomorphic to the localization at (P:M)",
        checks,
        tuple(failures),
    )


# -- criterion 5 -------------------------------------------------------------

def check_sections_match_localizations(
    modules: Sequence[FgModule] | None = None,
) -> SuiteResult:
    """The map m/f^n -> (P -> m/f^n) is bijective onto the sections of
    D(fM) for every finite module and scalar, globally included."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        for f in range(0, _scalar_bound(m) + 1):
            checks += 1
            res = psi_map(m, f)
            if not res.bijective:
                failures.append(f"{m}: comparison map not bijective at f={f}")
        checks += 1
        if not iso_class_equal(psi_map(m, 1).space.carrier, m):
            failures.append(f"{m}: global sections differ from M")
    return SuiteResult(
        "sections",
        "sections over D(fM) realize the localized module M_f",
        checks,
        tuple(failures),
    )


# -- criterion 6 -------------------------------------------------------------

def check_iso_criterion(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Radical equality of (fM:M), (gM:M) is equivalent to M_f iso M_g on
    finite modules; the Pruefer group separates the two sides."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        bound = _scalar_bound(m)
        for f in range(1, bound + 1):
            for g in range(1, bound + 1):
                checks += 1
                res = iso_criterion(m, f, g)
                if res.radicals_equal != res.modules_isomorphic:
                    failures.append(f"{m}: f={f} g={g} sides disagree")
    for m in _modules(modules, include_prufer=True):
        if not m.is_prufer:
            continue
        p = m.prufer_prime
        q = next(x for x in (2, 3, 5, 7) if x != p)
        checks += 1
        res = iso_criterion(m, p, q)
        counterexample = (
            res.radical_f == ideal(ZZ, 1)
            and res.radical_g == ideal(ZZ, 1)
            and res.loc_f.kind == "zero"
            and res.loc_g.kind == "prufer"
            and not res.modules_isomorphic
        )
        if not counterexample:
            failures.append(f"{m}: counterexample profile not reproduced")
    return SuiteResult(
        "iso-criterion",
        "localization isomorphism criterion, both directions",
        checks,
        tuple(failures),
    )


# -- criterion 7 -------------------------------------------------------------

def check_prufer_controls(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Negative controls on the divisible torsion group: empty spectrum,
    failing prime radical condition with certificate, vanishing global
    sections."""
    failures = []
    checks = 0
    mods = [m for m in (modules if modules is not None else prufer_corpus()) if m.is_prufer]
    for m in mods:
        checks += 3
        if not spec_enumerate(m).is_empty:
            failures.append(f"{m}: spectrum not empty")
        res = is_pradical(m)
        if res.holds or res.certificate is None or res.certificate.prime_ideal != ideal(
            ZZ, m.prufer_prime
        ):
            failures.append(f"{m}: missing or wrong certificate")
        spec = spec_enumerate(m)
        space = sections(m, spec.full_open())
        if not space.carrier.is_zero:
            failures.append(f"{m}: global sections nonzero")
        if natural_map(m).surjective:
            failures.append(f"{m}: natural map reported surjective")
    return SuiteResult(
        "prufer-controls",
        "primeless divisible counterexample behaves as stated",
        checks,
        tuple(failures),
    )


# -- criterion 8 -------------------------------------------------------------

def check_radical_sum_identity(
    modules: Sequence[FgModule] | None = None,
    seed: int = DEFAULT_SEED,
    randomized: int = 1000,
    max_modulus: int = 60,
) -> SuiteResult:
    """sqrt((I+J) cap (I+K)) = sqrt(I + (J cap K)): exhaustive over Z/n for
    n <= 60 and randomized over Z."""
    failures = []
    checks = 0

    def verify(i, j, k):
        lhs = ideal_radical(
            ideal_combine("intersect", ideal_combine("sum", i, j), ideal_combine("sum", i, k))
        )
        rhs = ideal_radical(ideal_combine("sum", i, ideal_combine("intersect", j, k)))
        return lhs == rhs

    for n in range(2, max_modulus + 1):
        ring = Zmod(n)
        ideals = [ideal(ring, d) for d in range(1, n + 1) if n % d == 0]
        for i in ideals:
            for j in ideals:
                for k in ideals:
                    checks += 1
                    if not verify(i, j, k):
                        failures.append(f"Z/{n}: I={i.gen} J={j.gen} K={k.gen}")
    rng = random.Random(seed)
    for _ in range(randomized):
        i, j, k = (ideal(ZZ, rng.randint(0, 10**6)) for _ in range(3))
        checks += 1
        if not verify(i, j, k):
            failures.append(f"Z: I={i.gen} J={j.gen} K={k.gen}")
    return SuiteResult(
        "radical-sum-identity",
        "radical of (I+J) cap (I+K) equals radical of I + (J cap K)",
        checks,
        tuple(failures),
    )


# -- criterion 9 -------------------------------------------------------------

def check_prime_correspondence(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Localization bijection P -> P_S with inverse Q -> Q^c, order
    preserved, colon ideals commuting with localization."""
    failures = []
    checks = 0
    for m in _modules(modules):
        for ms in _mult_sets(m):
            checks += 1
            try:
                prime_correspondence(m, ms)
            except CorrespondenceError as exc:
                failures.append(str(exc))
    return SuiteResult(
        "prime-correspondence",
        "localization prime correspondence with colon commutation",
        checks,
        tuple(failures),
    )


# -- criterion 10 ------------------------------------------------------------

def check_direct_sums(
    modules: Sequence[FgModule] | None = None,
    seed: int = DEFAULT_SEED,
    pairs: int = 200,
) -> SuiteResult:
    """Direct sums stay in the prime radical class, and primes of a summand
    lift to primes of the sum with the same characteristic ideal."""
    failures = []
    checks = 0
    pool = [m for m in _modules(modules, finite_only=True) if m.ring.modulus is None]
    rng = random.Random(seed)
    for _ in range(pairs):
        m1, m2 = rng.choice(pool), rng.choice(pool)
        m, e1, e2 = direct_sum_with_embeddings(m1, m2)
        checks += 1
        if not is_pradical(m).holds:
            failures.append(f"{m1} (+) {m2}: prime radical condition lost")
        if m1.is_zero:
            continue
        for ps in spec_enumerate(m1).primes():
            checks += 1
            p = ps.char_prime
            gens = [e1.apply(m1.element(row)) for row in ps.sub.basis]
            gens += [e2.apply(g) for g in m2.generators()]
            lifted = submodule_from_generators(m, gens)
            ok = (
                not lifted.is_full
                and scalar_multiple_submodule(p, m) <= lifted
                and colon(lifted, m) == ideal(m.ring, p)
            )
            if ok and m.cardinality <= 512:
                ok = is_prime_submodule(lifted, m) == ideal(m.ring, p)
            if not ok:
                failures.append(f"{m1} (+) {m2}: prime over ({p}) fails to lift")
    return SuiteResult(
        "direct-sums",
        "direct sums preserve the prime radical condition; primes lift",
        checks,
        tuple(failures),
    )


# -- criterion 11 ------------------------------------------------------------

def check_localization_oracle(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """The factor-stripping localization agrees with the pair-equivalence
    oracle up to isomorphism class."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        for ms in _mult_sets(m):
            checks += 1
            fast = localize(m, ms)
            slow = localize_bruteforce(m, ms)
            if not iso_class_equal(fast, slow) or fast.ring != slow.ring:
                failures.append(f"{m} at {ms}: {fast.factors} vs {slow.factors}")
    return SuiteResult(
        "localization-oracle",
        "localization matches the brute-force pair construction",
        checks,
        tuple(failures),
    )


# -- criterion 12 ------------------------------------------------------------

def check_cover_decomposition(
    modules: Sequence[FgModule] | None = None,
    seed: int = DEFAULT_SEED,
    covers: int = 100,
) -> SuiteResult:
    """Random exact covers of basic opens decompose: f^n = sum(r_i b_i)
    exactly with r_i in (h_i M : M), and D(fM) = union D(r_i M)."""
    failures = []
    checks = 0
    pool = [m for m in _modules(modules, finite_only=True) if not m.is_zero]
    rng = random.Random(seed)
    coprime_pad = (1, 1, 5, 7, 25, 35, 49)
    for _ in range(covers):
        m = rng.choice(pool)
        spectrum = spec_enumerate(m)
        relevant = sorted(spectrum.fiber_primes)
        f = rng.randint(0, 12)
        d_f = sorted(basic_open(f, m, spectrum).fiber_primes)
        k = rng.randint(1, 3)
        subsets = []
        for i in range(k):
            subset = {p for p in d_f if rng.random() < 0.6}
            subsets.append(subset)
        missing = set(d_f) - set().union(*subsets) if subsets else set(d_f)
        for p in missing:
            subsets[rng.randrange(k)].add(p)
        hs = []
        for subset in subsets:
            h = 1
            for p in relevant:
                if p not in subset:
                    h *= p ** rng.randint(1, 2)
            pad = rng.choice(coprime_pad)
            if all(pad % p for p in relevant):
                h *= pad
            hs.append(h)
        checks += 1
        try:
            dec = cover_decompose(m, f, hs)
        except PropertyViolation as exc:
            failures.append(f"{m}: f={f} hs={hs}: {exc}")
            continue
        target = m.ring.reduce(f) ** dec.exponent
        acc = sum(r * b for r, b in dec.pairs)
        if m.ring.modulus is not None:
            target %= m.ring.modulus
            acc %= m.ring.modulus
        if acc != target:
            failures.append(f"{m}: f={f} hs={hs}: combination does not re-verify")
        if not all(
            a.contains_element(r) for (r, _), a in zip(dec.pairs, dec.colon_ideals)
        ):
            failures.append(f"{m}: f={f} hs={hs}: coefficient outside its colon ideal")
        if not dec.covers_exactly:
            failures.append(f"{m}: f={f} hs={hs}: D(fM) != union D(r_i M)")
    return SuiteResult(
        "cover-decomposition",
        "exact covers of D(fM) yield exact combinations f^n = sum r_i b_i",
        checks,
        tuple(failures),
    )


# -- criterion 13 ------------------------------------------------------------

def check_sheaf_axioms(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Identity, unique gluing and restriction transitivity over every open
    and every cover, for modules with at most 4 fibers."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        if len(spec_enumerate(m).fiber_primes) > 4:
            continue
        checks += 1
        report = sheaf_axioms_check(m)
        if not report.ok:
            failures.append(f"{m}: {report.failures[:3]}")
    return SuiteResult(
        "sheaf-axioms",
        "identity + gluing + transitivity over all opens and covers",
        checks,
        tuple(failures),
    )


# -- extra library-level properties used by `verify --suite all` -------------

def check_transfer_reports(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Localization transfer clauses hold with their hypotheses."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        checks += 1
        report = verify_localization_transfer(m, _mult_sets(m))
        if not report.ok:
            bad = [c.name for c in report.clauses if not c.ok]
            failures.append(f"{m}: {bad}")
    return SuiteResult(
        "localization-transfer",
        "transfer of the prime radical condition along localizations",
        checks,
        tuple(failures),
    )


def check_primeful(modules: Sequence[FgModule] | None = None) -> SuiteResult:
    """Finite modules are primeful: the natural map hits every prime over
    the annihilator; varieties agree with their prime radicals."""
    failures = []
    checks = 0
    for m in _modules(modules, finite_only=True):
        checks += 1
        if not natural_map(m).surjective:
            failures.append(f"{m}: natural map not surjective")
        if m.cardinality <= 64:
            spectrum = spec_enumerate(m)
            for sub in all_submodules(m):
                checks += 1
                if variety(sub, m, spectrum) != variety(prime_radical(sub, m), m, spectrum):
                    failures.append(f"{m}: V(N) != V(prime radical of N)")
    return SuiteResult(
        "primeful",
        "finite modules are primeful; V(N) = V(radical)",
        checks,
        tuple(failures),
    )


ACCEPTANCE_CRITERIA: tuple[tuple[str, Callable[..., SuiteResult]], ...] = (
    ("1", check_artinian_pradical),
    ("2", check_strategy_agreement),
    ("3", check_prime_radical_oracle),
    ("4", check_stalks),
    ("5", check_sections_match_localizations),
    ("6", check_iso_criterion),
    ("7", check_prufer_controls),
    ("8", check_radical_sum_identity),
    ("9", check_prime_correspondence),
    ("10", check_direct_sums),
    ("11", check_localization_oracle),
    ("12", check_cover_decomposition),
    ("13", check_sheaf_axioms),
)

# CLI suite tokens; "all" additionally runs every acceptance criterion plus
# the extra library-level properties
SUITES: dict[str, Callable[..., SuiteResult]] = {
    "2.1": check_radical_sum_identity,
    "2.3": check_direct_sums,
    "2.4": check_prime_correspondence,
    "3.1": check_stalks,
    "3.2": check_sections_match_localizations,
    "4.1": check_iso_criterion,
    "sheaf-axioms": check_sheaf_axioms,
}


def run_suite(name: str, modules: Sequence[FgModule] | None = None) -> list[SuiteResult]:
    if name == "all":
        results = [fn(modules) for _, fn in ACCEPTANCE_CRITERIA]
        results.append(check_transfer_reports(modules))
        results.append(check_primeful(modules))
        return results
    if name not in SUITES:
        raise ValueError(f"unknown suite {name!r}")
    return [SUITES[name](modules)]
