from .airy import (
    AiryValue,
    airy_eval,
    ai,
    ai_prime,
    ai_zero,
    ai_prime_zero,
    ai_zeros,
    ai_prime_zeros,
    ai_squared_tail,
)
from .spectrum import (
    Eigenpair,
    intrinsic_params,
    unit_params,
    bouncer_params,
    wall_spectrum,
    wedge_spectrum,
    eigenstate_eval,
    eigenstate_derivative,
    probability_density,
    eigen_residual,
    norm_integral,
    overlap,
    time_phase,
    sample_wavefunction,
    spectrum_report,
)
from .operators import (
    OperatorTerm,
    OperatorExpr,
    CommutatorTable,
    build_commutator_table,
    commutator,
    quantize_poly,
    constraint_operators,
    hamiltonian_operator,
    substitution_rules,
    apply_substitution,
    momentum_representation_matrix,
    physical_reduction,
    intrinsic_equivalence_check,
)

__all__ = [
    "AiryValue",
    "airy_eval",
    "ai",
    "ai_prime",
    "ai_zero",
    "ai_prime_zero",
    "ai_zeros",
    "ai_prime_zeros",
    "ai_squared_tail",
    "Eigenpair",
    "intrinsic_params",
    "unit_params",
    "bouncer_params",
    "wall_spectrum",
    "wedge_spectrum",
    "eigenstate_eval",
    "eigenstate_derivative",
    "probability_density",
    "eigen_residual",
    "norm_integral",
    "overlap",
    "time_phase",
    "sample_wavefunction",
    "spectrum_report",
    "OperatorTerm",
    "OperatorExpr",
    "CommutatorTable",
    "build_commutator_table",
    "commutator",
    "quantize_poly",
    "constraint_operators",
    "hamiltonian_operator",
    "substitution_rules",
    "apply_substitution",
    "momentum_representation_matrix",
    "physical_reduction",
    "intrinsic_equivalence_check",
]
