import math
import os
import sys
from dataclasses import replace

import numpy as np
import pytest

# 确保项目根目录在 sys.path 中
CURRENT_DIR = os.path.dirname(os.path.abspath(__file__))
PROJECT_ROOT = os.path.dirname(CURRENT_DIR)
if PROJECT_ROOT not in sys.path:
    sys.path.insert(0, PROJECT_ROOT)

from holobrack.algebra import PhaseSpace, Poly, poisson_bracket
from holobrack.core import (
    BallParams,
    IncompleteSystemError,
    InconsistentDynamicsError,
    IterationLimitError,
    NonPhysicalKineticError,
)
from holobrack.mechanics import (
    ConstrainedSystem,
    LagrangianSpec,
    ball_system,
    dirac_bergmann,
    dirac_bracket,
    dirac_bracket_table,
    fix_gauge,
    legendre_transform,
    surface_points,
    weakly_zero,
)
from holobrack.mechanics.ball import (
    PHYSICAL_MOMENTA,
    PHYSICAL_POSITIONS,
    dirac_table_closed_form,
    expected_constraints,
    multiplier_closed_form,
    theta_a_closed_form,
    theta_a_inverse_closed_form,
    theta_c_inverse_closed_form,
)
from holobrack.mechanics.multipliers import consistency_rhs


def _random_params(rng: np.random.Generator) -> BallParams:
    return BallParams(
        m=float(rng.uniform(0.5, 3.0)),
        g=float(rng.uniform(1.0, 12.0)),
        R=float(rng.uniform(0.2, 2.0)),
        phi=float(rng.uniform(0.05, 1.3)),
        a=float(rng.choice([0.0, 2.0])),
    )


@pytest.fixture(scope="module")
def params() -> BallParams:
    return BallParams()


@pytest.fixture(scope="module")
def system(params: BallParams):
    return ball_system(params)


@pytest.fixture(scope="module")
def random_systems():
    rng = np.random.default_rng(2024)
    out = []
    for _ in range(20):
        p = _random_params(rng)
        out.append((p, ball_system(p)))
    return out


@pytest.fixture()
def gauge_space() -> PhaseSpace:
    return PhaseSpace((("q", "p"), ("u", "pu")))


def _gauge_system(space: PhaseSpace):
    """L = ½q̇² − u·q：u 是乘子坐标，pu ≈ 0 是第一类约束"""
    spec = LagrangianSpec(
        space=space,
        mass_matrix=np.diag([1.0, 0.0]),
        potential=Poly.variable(space, "u") * Poly.variable(space, "q"),
    )
    H, primaries = legendre_transform(spec)
    return dirac_bergmann(H, primaries)


@pytest.mark.mechanics
class TestLegendre:
    def test_ball_primaries(self, params: BallParams):
        from holobrack.mechanics import ball_lagrangian

        H, primaries = legendre_transform(ball_lagrangian(params))
        assert [sorted(c.expr.variables()) for c in primaries] == [["Pi1"], ["Pi2"]]
        # Px² 的系数为 1/(2m)
        assert H.coefficient((0,) * 5 + (2, 0, 0, 0, 0)) == pytest.approx(0.5 / params.m)

    def test_negative_mass_rejected(self):
        space = PhaseSpace((("q", "p"),))
        spec = LagrangianSpec(space=space, mass_matrix=np.array([[-1.0]]), potential=Poly.zero(space))
        with pytest.raises(NonPhysicalKineticError):
            legendre_transform(spec)

    def test_mass_shape_checked(self):
        space = PhaseSpace((("q", "p"),))
        with pytest.raises(ValueError):
            LagrangianSpec(space=space, mass_matrix=np.eye(2), potential=Poly.zero(space))

    def test_kernel_of_active_block(self):
        space = PhaseSpace((("q1", "p1"), ("q2", "p2")))
        spec = LagrangianSpec(space=space, mass_matrix=np.ones((2, 2)), potential=Poly.zero(space))
        H, primaries = legendre_transform(spec)
        assert len(primaries) == 1
        coefs = primaries[0].expr.linear_coefficients()
        assert abs(coefs["p1"]) == pytest.approx(abs(coefs["p2"]))
        assert coefs["p1"] * coefs["p2"] < 0


@pytest.mark.mechanics
class TestDiracBergmannGeneric:
    def test_gauge_example(self, gauge_space: PhaseSpace):
        system = _gauge_system(gauge_space)
        assert system.iterations == 3
        assert system.multiplier_coordinates == ("u",)
        assert [sorted(c.expr.variables()) for c in system.constraints] == [["q"], ["pu"], ["p"]]
        assert system.first_class == [2]
        assert system.second_class == [1, 3]
        assert system.multipliers[2].is_free
        assert system.multipliers[1].status == "zero_on_surface"
        q, p = Poly.variable(gauge_space, "q"), Poly.variable(gauge_space, "p")
        assert dirac_bracket(q, p, system).is_zero()

    def test_empty_primaries(self, gauge_space: PhaseSpace):
        H = Poly.variable(gauge_space, "p") ** 2
        with pytest.raises(ValueError):
            dirac_bergmann(H, [])

    def test_free_particle_primary(self, gauge_space: PhaseSpace):
        spec = LagrangianSpec(space=gauge_space, mass_matrix=np.diag([1.0, 0.0]), potential=Poly.zero(gauge_space))
        H, primaries = legendre_transform(spec)
        system = dirac_bergmann(H, primaries)
        assert system.iterations == 1
        assert [sorted(c.expr.variables()) for c in system.constraints] == [["pu"]]
        assert system.first_class == [1]
        assert system.second_class == []
        assert system.multipliers[1].is_free

    def test_polynomial_multiples_not_added(self):
        """V = u·q + r·q²：q² 与 q·p、p² 都已被 q ≈ 0、p ≈ 0 蕴含"""
        space = PhaseSpace((("q", "p"), ("u", "pu"), ("r", "pr")))
        q, u, r = (Poly.variable(space, n) for n in ("q", "u", "r"))
        spec = LagrangianSpec(space=space, mass_matrix=np.diag([1.0, 0.0, 0.0]), potential=u * q + r * q * q)
        H, primaries = legendre_transform(spec)
        system = dirac_bergmann(H, primaries)
        assert system.iterations == 3
        assert all(expr.degree() == 1 for expr in system.exprs)
        assert sorted(v for expr in system.exprs for v in expr.variables()) == ["p", "pr", "pu", "q"]
        assert system.classified

    def test_constant_consistency_condition(self):
        space = PhaseSpace((("q", "p"),))
        spec = LagrangianSpec(space=space, mass_matrix=np.zeros((1, 1)), potential=Poly.variable(space, "q"))
        H, primaries = legendre_transform(spec)
        with pytest.raises(InconsistentDynamicsError):
            dirac_bergmann(H, primaries)

    def test_iteration_limit(self, params: BallParams):
        with pytest.raises(IterationLimitError):
            ball_system(params, max_iter=2)

    def test_unclassified_system(self, system):
        raw = system.with_constraints([replace(c, cls="unclassified") for c in system.constraints])
        x = Poly.variable(system.space, "x")
        with pytest.raises(IncompleteSystemError):
            dirac_bracket(x, x, raw)


@pytest.mark.mechanics
class TestBallConstraints:
    def test_discovery(self, params: BallParams, system):
        expected = expected_constraints(params)
        assert system.labels == [1, 2, 3, 4, 5, 6]
        for label, expr in expected.items():
            assert system.constraint(label).expr.allclose(expr, tol=1e-10)
        stages = {c.label: c.stage for c in system.constraints}
        assert stages == {1: 1, 2: 1, 3: 0, 4: 0, 5: 2, 6: 2}
        assert system.iterations == 3

    def test_multiplier_names(self, system):
        names = {c.label: c.multiplier for c in system.constraints}
        assert names[1] == "chi1"
        assert names[2] == "chi2"
        assert system.constraint(1).absorbed
        assert not system.constraint(5).absorbed

    def test_classification(self, system):
        assert system.first_class == [3, 4]
        assert system.second_class == [1, 2, 5, 6]

    def test_weak_equality(self, system):
        x = Poly.variable(system.space, "x")
        phi1 = system.constraint(1).expr
        assert weakly_zero(phi1 * x, system.exprs)
        assert not weakly_zero(x, system.exprs)
        points = surface_points(system.exprs, 5, seed=1)
        for expr in system.exprs:
            np.testing.assert_allclose(expr.compile()(points), 0.0, atol=1e-12)


    def test_weak_equality_polynomial_multiples(self, system):
        x, Px = Poly.variable(system.space, "x"), Poly.variable(system.space, "Px")
        phi1, phi5 = system.constraint(1).expr, system.constraint(5).expr
        assert weakly_zero(phi1 * phi1, system.exprs)
        assert weakly_zero(phi5 * Px * x + 3.0 * phi1 * x * x, system.exprs)
        assert not weakly_zero(x * x, system.exprs)
        assert not weakly_zero(x * Px + phi1 * x, system.exprs)

    def test_weak_equality_nonlinear_constraint(self):
        space = PhaseSpace((("q", "p"), ("s", "ps")))
        q, p, s = (Poly.variable(space, n) for n in ("q", "p", "s"))
        constraints = [q * q - s]
        assert weakly_zero((q * q - s) * p, constraints)
        assert weakly_zero(q * q * p - s * p + (q * q - s) * q, constraints)
        assert not weakly_zero(p, constraints)
        assert not weakly_zero(q * p, constraints)


@pytest.mark.mechanics
class TestTheta:
    def test_structure(self, system):
        theta = system.theta
        assert theta.is_antisymmetric()
        assert theta.rank == 4
        assert theta.zero_rows == (3, 4)

    def test_blocks_match_closed_form(self, params: BallParams, system):
        theta = system.theta
        np.testing.assert_allclose(theta.submatrix([5, 6], [1, 2]), theta_a_closed_form(params), atol=1e-12)
        np.testing.assert_allclose(theta.submatrix([1, 2], [5, 6]), -theta_a_closed_form(params), atol=1e-12)
        np.testing.assert_allclose(theta.block((5, 6)).inverse, theta_a_inverse_closed_form(params), atol=1e-12)
        np.testing.assert_allclose(theta.block((1, 2)).inverse, theta_c_inverse_closed_form(params), atol=1e-12)

    def test_flat_incline_block(self):
        flat = BallParams(phi=0.0, a=2.0)
        np.testing.assert_allclose(theta_a_closed_form(flat), [[-1.0, 0.0], [0.0, -3.5]])
        system = ball_system(flat)
        np.testing.assert_allclose(system.theta.submatrix([5, 6], [1, 2]), [[-1.0, 0.0], [0.0, -3.5]], atol=1e-12)

    def test_random_parameters(self, random_systems):
        for p, system in random_systems:
            scale = p.sec ** 2 + p.a
            np.testing.assert_allclose(
                system.theta.submatrix([5, 6], [1, 2]), theta_a_closed_form(p), atol=1e-12 * scale
            )
            np.testing.assert_allclose(
                system.theta.block((5, 6)).inverse, theta_a_inverse_closed_form(p), atol=1e-10
            )


@pytest.mark.mechanics
class TestMultipliers:
    def test_default_values(self, system):
        assert system.multipliers[1].surface_value() == pytest.approx(-6.3, rel=1e-12)
        assert system.multipliers[2].surface_value() == pytest.approx(1.979899, abs=1e-6)

    def test_statuses(self, system):
        status = {label: sol.status for label, sol in system.multipliers.items()}
        assert status == {
            1: "solved",
            2: "solved",
            3: "free",
            4: "free",
            5: "zero_on_surface",
            6: "zero_on_surface",
        }

    def test_random_parameters(self, random_systems):
        for p, system in random_systems:
            chi1, chi2 = multiplier_closed_form(p)
            assert system.multipliers[1].surface_value() == pytest.approx(chi1, rel=1e-10)
            assert system.multipliers[2].surface_value() == pytest.approx(chi2, rel=1e-10)

    def test_consistency_residual(self, random_systems):
        """把乘子代回 {Φ_j, H} + Σ Θ_jk u_k，约束面上残差为零"""
        for p, system in random_systems[:5]:
            labels = system.labels
            theta = system.theta.submatrix(labels, labels)
            u = np.array([system.multipliers[label].surface_value() for label in labels])
            rhs = consistency_rhs(system)
            points = system.surface_points(8, seed=3)
            b = np.stack([rhs[label].compile()(points) for label in labels], axis=1)
            residual = b + u @ theta.T
            assert np.abs(residual).max() < 1e-10 * max(1.0, p.m * p.g)

    def test_fix_gauge(self, system):
        fixed = fix_gauge(system, {3: 0.5})
        assert fixed.multipliers[3].surface_value() == 0.5
        assert fixed.multipliers[4].surface_value() == 0.0
        with pytest.raises(ValueError):
            fix_gauge(system, {1: 1.0})


@pytest.mark.mechanics
class TestDiracBrackets:
    def test_example_value(self):
        system = ball_system(BallParams(a=2.0, phi=math.pi / 6))
        x, Px = Poly.variable(system.space, "x"), Poly.variable(system.space, "Px")
        assert dirac_bracket(x, Px, system).constant_term() == pytest.approx(15.0 / 28.0, rel=1e-12)

    def test_unconstrained_reduces_to_poisson(self, system):
        space = system.space
        x, y, Px = (Poly.variable(space, n) for n in ("x", "y", "Px"))
        free = ConstrainedSystem.unconstrained(system.hamiltonian)
        for F, G in [(x, Px), (x * Px * Px, y + x * x), (system.hamiltonian, Px * y)]:
            assert dirac_bracket(F, G, free).allclose(poisson_bracket(F, G))

    def test_constraints_are_casimirs(self, system):
        for label in system.second_class:
            phi = system.constraint(label).expr
            for name in PHYSICAL_POSITIONS + PHYSICAL_MOMENTA:
                assert dirac_bracket(phi, Poly.variable(system.space, name), system).is_zero()

    def test_table_random_parameters(self, random_systems):
        names = PHYSICAL_POSITIONS + PHYSICAL_MOMENTA
        for p, system in random_systems:
            closed = dirac_table_closed_form(p)
            table = dirac_bracket_table(system, names, names)
            for (a, b), poly in table.items():
                assert poly.is_constant()
                if (a, b) in closed:
                    target = closed[(a, b)]
                elif (b, a) in closed:
                    target = -closed[(b, a)]
                else:
                    target = 0.0
                assert poly.constant_term() == pytest.approx(target, abs=1e-10)
