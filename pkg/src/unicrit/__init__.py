"""Certified arithmetic dynamics for the unicritical family f_t(z) = z^d + t."""

from .adelic import (
    HeightValue,
    PairingReport,
    pairing_global,
    product_formula_check,
    weil_height_pair,
    weil_height_single,
)
from .arch import (
    cover_check_d2,
    cover_check_dgt2,
    green_arch,
    isolate_roots,
    member_M_a,
    pairing_arch,
    pairing_arch_bounds,
    roots,
)
from .errors import (
    DegreeCapExceeded,
    HypothesisViolated,
    PreconditionError,
    RootFinderStagnated,
    SymmetricInputsError,
    UnicritError,
    Undetermined,
)
from .exact_core import (
    DensePoly,
    PreperiodicParameterSet,
    find_common_preperiodic,
    iterate_poly,
    preperiodic_poly,
    squarefree_part,
)
from .harness import (
    TheoremVerdict,
    bound_C_d,
    explore_thm_1_4,
    verify_thm_1_2,
    verify_thm_1_3,
    verify_thm_4_13,
)
from .intervals import Ball, GreenValue
from .nonarch import (
    LocalPairingCase,
    green_nonarch,
    newton_root_structure,
    padic_abs,
    pairing_nonarch,
)

__version__ = "0.1.0"
