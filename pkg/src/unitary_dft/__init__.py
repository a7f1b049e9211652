"""Unitary submatrices of the DFT matrix, orthogonal sampling sets and tilings of Z_N."""
from .config import SearchBounds
from .counting import (
    brute_force_count_sampling_sets,
    brute_force_count_unitary_pairs,
    count_sampling_sets,
    count_unitary_pairs,
    theta_phi_table,
)
from .digit_table import (
    DigitTable,
    build_table,
    canonical_valid_table,
    construct_valid,
    decompose,
    dual_markings,
    enumerate_valid,
    is_valid,
    pivots,
    recompose,
)
from .errors import SearchBoundExceeded, SingularSubmatrixError
from .graph import (
    DifferenceGraph,
    berge_certify,
    build_graph,
    divisibility_scan,
    export_dot,
    find_odd_hole,
    max_clique,
)
from .idempotent import (
    Idempotent,
    IntPolynomial,
    cyclotomic,
    eval_numeric,
    is_block_concatenation_form,
    prescribe_zero_set,
    ramanujan_sum,
    zero_set,
    zero_set_divisors,
)
from .sampling import (
    FourierSubmatrix,
    InterpolatingBasis,
    consecutive_family,
    find_orthogonal_sampling_set,
    interpolating_basis,
    is_orthogonal_sampling_set,
    is_unitary_pair,
    make_unitary_pair,
    progression_family,
    reconstruct,
)
from .tiling import find_tiling_complement, fuglede_check, fuglede_sweep, tiles
from .zn import (
    DivisorSet,
    IndexSet,
    Modulus,
    bracelet,
    digits_base_p,
    divisors_proper,
    first_nonzero_digit_index,
    gcd_class,
)

__version__ = "0.1.0"
