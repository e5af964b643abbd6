import pytest

from modspec.arith import ZZ, Zmod, ideal
from modspec.fgmodules import (
    UnsupportedModuleError,
    all_submodules,
    colon,
    direct_sum,
    from_cyclic_orders,
    normalize,
    prufer_module,
    scalar_multiple_submodule,
    submodule_from_generators,
    zero_module,
)
from modspec.spectrum import (
    basic_open,
    is_pradical,
    is_prime_submodule,
    natural_map,
    prime_radical,
    spec_enumerate,
    variety,
)

SMALL_CORPUS = [
    from_cyclic_orders(ZZ, o)
    for o in [(2,), (4,), (6,), (12,), (2, 2), (2, 4), (2, 6), (3, 3), (2, 2, 2), (36,), (4, 8)]
] + [
    normalize(Zmod(12), 1, [[4]]),
    normalize(Zmod(12), 1, []),
    normalize(Zmod(36), 2, [[6, 0], [0, 6]]),
    normalize(Zmod(4), 1, []),
]


# ---------------------------------------------------------------------------
# prime testing
# ---------------------------------------------------------------------------

def test_is_prime_examples():
    m = from_cyclic_orders(ZZ, [4])
    p = submodule_from_generators(m, [m.element([2])])
    assert is_prime_submodule(p) == ideal(ZZ, 2)

    assert is_prime_submodule(m.zero_submodule()) is None
    assert is_prime_submodule(m.full_submodule()) is None


def test_is_prime_rejects_infinite():
    free = normalize(ZZ, 1, [])
    with pytest.raises(UnsupportedModuleError):
        is_prime_submodule(free.zero_submodule())


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def test_spec_z6():
    m = from_cyclic_orders(ZZ, [6])
    spec = spec_enumerate(m, "both")
    assert spec.fiber_primes == {2, 3}
    (p2,) = spec.fiber(2)
    (p3,) = spec.fiber(3)
    assert p2.sub == scalar_multiple_submodule(2, m)
    assert p3.sub == scalar_multiple_submodule(3, m)


def test_spec_klein():
    m = from_cyclic_orders(ZZ, [2, 2])
    spec = spec_enumerate(m, "both")
    assert spec.fiber_primes == {2}
    fiber = spec.fiber(2)
    assert len(fiber) == 4  # zero submodule and the three order-2 subgroups
    orders = sorted(ps.sub.order() for ps in fiber)
    assert orders == [1, 2, 2, 2]


def test_spec_prufer_and_zero():
    assert spec_enumerate(prufer_module(3)).is_empty
    assert spec_enumerate(zero_module(ZZ)).is_empty


@pytest.mark.parametrize("module", SMALL_CORPUS, ids=str)
def test_strategy_agreement(module):
    spec_enumerate(module, "both")  # raises StrategyMismatchError on disagreement


@pytest.mark.parametrize("module", SMALL_CORPUS, ids=str)
def test_fibers_nonempty_and_correctly_labeled(module):
    spec = spec_enumerate(module, "both")
    assert spec.fiber_primes == set(module.relevant_primes())
    for p, chunk in spec.fibers:
        assert chunk
        for ps in chunk:
            assert ps.char_ideal == ideal(module.ring, p)
            assert colon(ps.sub, module) == ps.char_ideal
            assert not ps.sub.is_full


# ---------------------------------------------------------------------------
# topology
# ---------------------------------------------------------------------------

def test_variety_examples():
    m = from_cyclic_orders(ZZ, [6])
    assert variety(m.zero_submodule()).fiber_primes == {2, 3}
    assert variety(m.full_submodule()).fiber_primes == set()
    assert variety(scalar_multiple_submodule(2, m)).fiber_primes == {2}


def test_basic_open_examples():
    m = from_cyclic_orders(ZZ, [6])
    assert basic_open(3, m).fiber_primes == {2}
    assert basic_open(1, m).fiber_primes == {2, 3}

    m12 = normalize(Zmod(12), 1, [])
    assert basic_open(6, m12).fiber_primes == set()


@pytest.mark.parametrize("module", SMALL_CORPUS, ids=str)
def test_basic_open_is_nondivisibility(module):
    spec = spec_enumerate(module)
    for f in range(0, 8):
        got = basic_open(f, module, spec).fiber_primes
        expected = {p for p in spec.fiber_primes if module.ring.reduce(f) % p != 0}
        assert got == expected


@pytest.mark.parametrize("module", [m for m in SMALL_CORPUS if m.cardinality <= 64], ids=str)
def test_variety_depends_only_on_prime_radical(module):
    spec = spec_enumerate(module)
    for sub in all_submodules(module):
        rad = prime_radical(sub, module)
        assert variety(sub, module, spec) == variety(rad, module, spec)
        # and the variety is exactly the set of primes containing N
        direct = frozenset(
            ps.char_prime for ps in spec.primes() if sub <= ps.sub
        )
        assert variety(sub, module, spec).fiber_primes == direct


# ---------------------------------------------------------------------------
# prime radicals
# ---------------------------------------------------------------------------

def test_prime_radical_examples():
    m = from_cyclic_orders(ZZ, [4])
    rad = prime_radical(m.zero_submodule())
    assert sorted(e.coords for e in rad.elements()) == [(0,), (2,)]

    assert prime_radical(m.full_submodule()).is_full

    p = prufer_module(3)
    assert prime_radical(p.zero_submodule()).is_full


@pytest.mark.parametrize("module", [m for m in SMALL_CORPUS if m.cardinality <= 64], ids=str)
def test_prime_radical_closed_form_matches_bruteforce(module):
    for sub in all_submodules(module):
        assert prime_radical(sub, module, "both") is not None


# ---------------------------------------------------------------------------
# the prime radical condition
# ---------------------------------------------------------------------------

def test_pradical_examples():
    m = normalize(Zmod(6), 1, [])
    assert is_pradical(m).holds

    res = is_pradical(prufer_module(5))
    assert not res.holds
    assert res.certificate.prime_ideal == ideal(ZZ, 5)
    assert res.certificate.lhs == ideal(ZZ, 1)

    assert is_pradical(zero_module(ZZ)).holds


def test_pradical_free_rank_symbolic():
    free = normalize(ZZ, 2, [[2, 0]])
    assert free.free_rank == 1
    assert is_pradical(free).holds


@pytest.mark.parametrize("module", SMALL_CORPUS, ids=str)
def test_all_finite_corpus_modules_are_pradical(module):
    assert is_pradical(module).holds


def test_pradical_direct_sums():
    a = from_cyclic_orders(ZZ, [4])
    b = from_cyclic_orders(ZZ, [6])
    assert is_pradical(direct_sum(a, b)).holds


# ---------------------------------------------------------------------------
# the natural map
# ---------------------------------------------------------------------------

def test_natural_map_examples():
    m = from_cyclic_orders(ZZ, [6])
    res = natural_map(m)
    assert res.surjective
    assert set(res.codomain_primes) == {2, 3}
    assert {i.gen for _, i in res.assignments} == {2, 3}

    res = natural_map(prufer_module(3))
    assert not res.surjective and res.codomain_primes is None

    assert natural_map(zero_module(ZZ)).surjective


@pytest.mark.parametrize("module", SMALL_CORPUS, ids=str)
def test_finite_modules_are_primeful(module):
    assert natural_map(module).surjective
