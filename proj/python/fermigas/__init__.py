"""Python interface to the fermigas numerics core (units hbar^2/2m = 1)."""

from ._fermigas import (
    ConvergenceError,
    RadialPotential,
    ScatteringSolution,
    ScheduleInfeasible,
    balanced_minimum,
    density_square_integral,
    determinantal_check,
    dirichlet_energy_sum,
    dirichlet_k2_sum,
    fermi_leading_term,
    free_two_body_energy,
    kinetic_leading,
    lower_bound,
    pseudopotential_prediction,
    scattering_energy_integral,
    solve_zero_energy,
    square_barrier_scattering_length,
    sweep_bounds,
    tune_scattering_length,
    two_body_ground_state,
    two_particle_density,
    upper_bound,
)


def load_potential(path):
    """Read a potential JSON file."""
    import json

    with open(path) as f:
        return RadialPotential.from_dict(json.load(f))


__all__ = [name for name in dir() if not name.startswith("_") and name != "json"]
__version__ = "0.1.0"
