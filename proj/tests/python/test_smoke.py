import math
from pathlib import Path

import pytest

import fermigas as fg

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def test_hard_sphere_scattering_length():
    sol = fg.solve_zero_energy(fg.RadialPotential.hard_sphere(1.0), 3)
    assert sol.a == pytest.approx(1.0, abs=1e-9)
    assert sol.phi(3.0) == pytest.approx(1.0 - 1.0 / 3.0, rel=1e-9)


def test_square_barrier_matches_closed_form():
    height, rng = 4.0, 1.0
    k = math.sqrt(height / 2.0)
    expected = rng - math.tanh(k * rng) / k
    v = fg.RadialPotential.square_barrier(height, rng)
    assert fg.solve_zero_energy(v, 3).a == pytest.approx(expected, rel=1e-8)
    assert fg.square_barrier_scattering_length(height, rng) == pytest.approx(expected, rel=1e-12)


def test_potential_round_trip_and_errors():
    v = fg.load_potential(FIXTURES / "barrier.json")
    again = fg.RadialPotential.from_dict(v.to_dict())
    assert again(0.5) == v(0.5)
    assert v.range == pytest.approx(1.0)
    with pytest.raises(ValueError):
        fg.RadialPotential.from_dict({"label": "x", "pieces": "nope"})


def test_fermi_sea_sums():
    # four lowest modes of the unit cube: (1,1,1) and the three permutations of (2,1,1)
    assert fg.dirichlet_k2_sum(4, 3) == 3 + 3 * 6
    assert fg.dirichlet_energy_sum(1, 1.0, 3) == pytest.approx(3 * math.pi**2)
    n = 20000
    assert fg.dirichlet_energy_sum(n, 1.0, 3) / fg.kinetic_leading(n, 1.0, 3) > 1.0


def test_pair_density_vanishes_at_coincidence():
    x = [0.3, 0.4, 0.5]
    assert fg.two_particle_density(10, 1.0, x, x) == pytest.approx(0.0, abs=1e-10)
    assert fg.two_particle_density(10, 1.0, x, [0.6, 0.2, 0.7]) > 0.0


def test_determinantal_check():
    report = fg.determinantal_check(seed=3)
    assert report["failures"] == 0
    assert report["max_error"] < 1e-5


def test_bounds_sandwich_the_leading_term():
    up = fg.upper_bound(3, 1e-24)
    lo = fg.lower_bound(3, 1e-24)
    assert up["feasible"] and lo["feasible"]
    assert lo["total"] <= up["total"]
    with pytest.raises(ValueError):
        fg.upper_bound(4, 1e-24)


def test_two_body_shift_matches_pseudopotential():
    a = 0.005
    tuned = fg.tune_scattering_length(fg.RadialPotential.square_barrier(1.0, 0.1), a)
    result = fg.two_body_ground_state(tuned, 1.0, 4)
    ratio = (result["energy"] - result["free_energy"]) / (math.pi * a)
    assert ratio == pytest.approx(27.0, rel=0.05)
    assert fg.pseudopotential_prediction(0.0) == pytest.approx(fg.free_two_body_energy(1.0, 3))
