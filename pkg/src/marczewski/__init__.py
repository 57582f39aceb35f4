"""Clones, hulls and Marczewski independence in finite universal algebras."""

__version__ = "0.1.0"

from .algebra import (
    AlgebraError,
    FiniteAlgebra,
    GuardError,
    Operation,
    canonicalize,
    compose,
    constant,
    evaluate,
    from_function,
    projection,
    substitute,
)
from .clone import (
    CloneSlice,
    clone_upto,
    empty_regularize,
    is_clone_upto,
    is_composition_stable,
    is_empty_regular,
    is_substitution_stable,
    is_unital,
)
from .hull import (
    HullOperator,
    algebra_hull,
    check_closure,
    check_exchange,
    clone_hull,
    generated_hull,
    generated_subalgebra,
    is_matroid_type,
    term_closure_hull,
)
from .independence import (
    Verdict,
    extend_to_maximal_independent,
    is_free,
    is_free_clone,
    is_independence_algebra,
    is_independent,
    is_strongly_independent,
)
from .power import PowerAlgebra, boolean_clone, delta, lift
from .families import (
    SubsetFamily,
    check_prop_4_1,
    coordinate_family,
    family_to_functions,
    functions_to_family,
    hausdorff_family,
    is_independent_family,
)
from .freeset import (
    FreeSetCertificate,
    build_free_set,
    check_certificate,
    dump_certificate,
    load_certificate,
    verify_free_in_power,
)
from .corpus import (
    check_prop_1_3,
    constant_pair_algebra,
    cyclic_group,
    gould_algebra,
    linear_algebra_f2,
    semidirect_group,
)
