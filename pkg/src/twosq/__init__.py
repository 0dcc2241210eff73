"""Sums of two squares and at most k powers of 2: sieving, certificates of
non-representability and the tower families built from them."""

from .analysis import (
    DensityReport,
    density_report,
    residue_family_check,
    residue_family_prove,
    shift_check,
    tower_density_listing,
)
from .arith import (
    Factorization,
    TwoSquaresVerdict,
    factor,
    is_prime,
    squares_mod,
    two_square_sums_mod,
    two_squares_classify,
    two_squares_oracle,
)
from .certificates import (
    CaseRecord,
    Certificate,
    FamilyStatement,
    RepresentationWitness,
    certify,
    dumps_certificate,
    enumerate_cases,
    lift_family,
    load_certificate,
    save_certificate,
    spot_check_family,
    verify_certificate,
)
from .sieve import (
    MarkTable,
    SieveConfig,
    first_unmarked,
    load_table,
    run_sieve,
    save_table,
    unmarked,
    unmarked_count,
)

N0 = 1151121374334

__version__ = "0.1.0"
