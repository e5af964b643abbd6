"""Exact prime spectra, localizations and structure sheaves of finitely
generated modules over Z and Z/n."""

from .arith import (
    BezoutDecomposition,
    FactorBoundExceeded,
    Ideal,
    NotInRadicalError,
    Ring,
    RingMismatchError,
    ZZ,
    Zmod,
    bezout_decompose,
    ideal,
    ideal_combine,
    ideal_radical,
    is_prime_ideal,
    radical_membership_witness,
)
from .corpus import finite_corpus, full_corpus, prufer_corpus
from .fgmodules import (
    CapExceededError,
    FgModule,
    LinearMap,
    ModElement,
    PruferElement,
    Submodule,
    UnsupportedModuleError,
    all_submodules,
    annihilator,
    colon,
    direct_sum,
    direct_sum_with_embeddings,
    from_cyclic_orders,
    iso_class_equal,
    normalize,
    prufer_module,
    scalar_multiple_submodule,
    submodule_from_generators,
    zero_module,
)
from .localization import (
    CorrespondenceError,
    LocalizedModule,
    MultSet,
    PrimeCorrespondence,
    TransferReport,
    localize,
    localize_bruteforce,
    prime_correspondence,
    relocalize,
    verify_localization_transfer,
)
from .sheaf import (
    CoverDecomposition,
    CoverError,
    Germ,
    IsoCriterionResult,
    PsiMapResult,
    Section,
    SectionSpace,
    SheafAxiomsReport,
    StalkResult,
    cover_decompose,
    iso_criterion,
    psi_map,
    restrict,
    sections,
    sheaf_axioms_check,
    stalk,
)
from .spectrum import (
    ClosedSet,
    NaturalMapResult,
    OpenSet,
    PradicalResult,
    PrimeSubmodule,
    PropertyViolation,
    Spectrum,
    StrategyMismatchError,
    basic_open,
    is_pradical,
    is_prime_submodule,
    natural_map,
    prime_radical,
    spec_enumerate,
    variety,
)

__version__ = "0.1.0"
