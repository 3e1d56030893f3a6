from .eom import VectorField, eom_vector_field, evolution_hamiltonian, accelerations
from .integrator import Trajectory, integrate, rk4_step
from .intrinsic import (
    intrinsic_acceleration,
    intrinsic_hamiltonian,
    intrinsic_poisson_acceleration,
    nonholonomic_acceleration,
    effective_mass,
    effective_force,
    initial_state,
)

__all__ = [
    "VectorField",
    "eom_vector_field",
    "evolution_hamiltonian",
    "accelerations",
    "Trajectory",
    "integrate",
    "rk4_step",
    "intrinsic_acceleration",
    "intrinsic_hamiltonian",
    "intrinsic_poisson_acceleration",
    "nonholonomic_acceleration",
    "effective_mass",
    "effective_force",
    "initial_state",
]
