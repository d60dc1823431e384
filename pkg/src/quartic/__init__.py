"""Elementary sieve-and-descent machinery for (t+1)X^4 - tY^2 = 1."""

__version__ = "0.1.0"

from .pell import (  # noqa: E402
    AlphaPower,
    EquationParams,
    ModPair,
    alpha_power_exact,
    alpha_power_mod,
    integer_sqrt,
    jacobi,
    pair_multiply,
    triple_index_factor,
)
from .sieve import FactorBase, SieveConfig, SieveOutcome, build_factor_base, escalate, run_sieve, sequence_period  # noqa: E402
from .descent import decompose, jacobi_witness, prove_t2, reduce_class3, verify_chain_t2  # noqa: E402
from .conjecture import family_poly, scan_family, verify_conjecture31  # noqa: E402
from .reduction import brute_force_index, brute_force_quartic, fundamental_solution, to_canonical  # noqa: E402
