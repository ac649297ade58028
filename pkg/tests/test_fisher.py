"""Tests for classical/quantum Fisher information and the Fisher tensor."""

import math

import numpy as np
import pytest

from qfg.errors import DomainError, InvalidPovm, NotAPovm, NotNormalized
from qfg.fisher import (
    EPS_P,
    FisherTensorValue,
    Povm,
    WavefunctionGrid,
    assemble_drho,
    classical_fisher,
    fisher_tensor,
    fisher_tensor_general,
    povm_diagnose,
    pure_qdit_fisher,
    qfi_qubit_closed_form,
    quantum_fisher,
    total_fisher_metric,
    wavefunction_fisher,
)
from qfg.linalg import DensityOp, PAULI_Y
from qfg.sld import GreatCirclePure, differentiate_curve, drho_sphere
from qfg.states import qubit_point, rho_of_kz

SZ_PAIR = Povm([np.diag([1.0, 0.0]), np.diag([0.0, 1.0])])
SY_PAIR = Povm([(np.eye(2) + PAULI_Y) / 2, (np.eye(2) - PAULI_Y) / 2])


class TestPovm:
    def test_completeness_required(self):
        with pytest.raises(InvalidPovm):
            Povm([np.diag([1.0, 0.0])])

    def test_psd_required(self):
        with pytest.raises(InvalidPovm):
            Povm([np.diag([1.5, 1.0]), np.diag([-0.5, 0.0])])

    def test_diagnose_reports_defect(self):
        assert "defect" in povm_diagnose([np.diag([0.99, 0.99])])
        assert povm_diagnose([np.eye(2) / 2, np.eye(2) / 2]) is None


class TestClassicalFisher:
    def test_great_circle_sz(self):
        curve = GreatCirclePure()
        rho = curve.rho_at(math.pi / 3)
        drho = differentiate_curve(curve, math.pi / 3)
        assert classical_fisher(rho, drho, SZ_PAIR) == pytest.approx(1.0, abs=1e-12)

    def test_great_circle_sy_blind(self):
        curve = GreatCirclePure()
        rho = curve.rho_at(math.pi / 3)
        drho = differentiate_curve(curve, math.pi / 3)
        assert classical_fisher(rho, drho, SY_PAIR) == pytest.approx(0.0, abs=1e-12)

    def test_zero_direction(self):
        rho = rho_of_kz(qubit_point(0.3, 0.5))
        assert classical_fisher(rho, np.zeros((2, 2)), SZ_PAIR) == 0.0

    def test_zero_probability_outcomes_skipped(self):
        rho = DensityOp(np.diag([1.0, 0.0]))
        drho = assemble_drho(0.25, 0, 0, 1)  # any traceless direction
        value = classical_fisher(rho, drho, SZ_PAIR)
        assert np.isfinite(value)


class TestQuantumFisher:
    def test_transverse_value(self):
        rho = DensityOp(np.diag([0.25, 0.75]))
        assert quantum_fisher(rho, np.diag([1.0, -1.0])) == pytest.approx(16 / 3, abs=1e-12)

    def test_great_circle_unit(self):
        curve = GreatCirclePure()
        for theta in np.linspace(0.1, 3.0, 9):
            rho = curve.rho_at(float(theta))
            drho = differentiate_curve(curve, float(theta))
            assert quantum_fisher(rho, drho) == pytest.approx(1.0, abs=1e-12)

    def test_zero_direction(self):
        rho = rho_of_kz(qubit_point(0.3, 0.5))
        assert quantum_fisher(rho, np.zeros((2, 2))) == 0.0

    def test_bound_dominates_classical(self):
        rng = np.random.default_rng(31)
        for _ in range(300):
            k = rng.uniform(0.02, 0.5)
            z = complex(rng.normal(), rng.normal()) * rng.uniform(0, 4)
            v = complex(rng.normal(), rng.normal())
            dk = rng.normal() * 0.4
            rho = rho_of_kz(qubit_point(k, z))
            drho = assemble_drho(k, z, dk, v)
            axis = rng.normal(size=3)
            axis /= np.linalg.norm(axis)
            ns = axis[0] * np.array([[0, 1], [1, 0]]) + axis[1] * PAULI_Y + axis[2] * np.diag([1, -1])
            povm = Povm([(np.eye(2) + ns) / 2, (np.eye(2) - ns) / 2])
            assert classical_fisher(rho, drho, povm) <= quantum_fisher(rho, drho) + 1e-9


class TestClosedForm:
    def test_sphere_only(self):
        q = qfi_qubit_closed_form(0.25, 0, 0, 1)
        assert q.sphere == pytest.approx(1.0)
        assert q.transverse == 0.0
        assert q.total == pytest.approx(1.0)

    def test_degenerate(self):
        q = qfi_qubit_closed_form(0.5, 0, 0.3 + 1j, 2.0)
        assert q.sphere == 0.0
        assert q.total == 0.0

    def test_transverse_only(self):
        assert qfi_qubit_closed_form(0.25, 1, 0, 0).transverse == pytest.approx(16 / 3)

    def test_matches_general_solver(self):
        rng = np.random.default_rng(32)
        for _ in range(200):
            k = rng.uniform(0.02, 0.5)
            z = complex(rng.normal(), rng.normal()) * rng.uniform(0, 4)
            v = complex(rng.normal(), rng.normal())
            dk = rng.normal() * 0.4
            total = qfi_qubit_closed_form(k, dk, z, v).total
            general = quantum_fisher(rho_of_kz(qubit_point(k, z)), assemble_drho(k, z, dk, v))
            assert total == pytest.approx(general, abs=1e-9)

    def test_k_range(self):
        with pytest.raises(DomainError):
            qfi_qubit_closed_form(0.6, 0, 0, 1)

    def test_metric_polarization(self):
        t1 = (0.2, 1 - 0.5j)
        assert total_fisher_metric(0.3, 0.4j, t1, t1) == pytest.approx(
            qfi_qubit_closed_form(0.3, 0.2, 0.4j, 1 - 0.5j).total
        )


class TestFisherTensor:
    def test_parallel_tangents(self):
        assert fisher_tensor(0.25, 0, 1, 1).value == pytest.approx(1.0)

    def test_orthogonal_tangents(self):
        value = fisher_tensor(0.25, 0, 1, 1j).value
        assert value == pytest.approx(-0.5j, abs=1e-15)

    def test_diagonal_is_real(self):
        value = fisher_tensor(0.3, 1 - 2j, 0.7 + 0.1j, 0.7 + 0.1j)
        assert value.antisym == pytest.approx(0.0, abs=1e-12)

    def test_symmetry_split(self):
        rng = np.random.default_rng(33)
        for _ in range(100):
            k = rng.uniform(0.02, 0.49)
            z = complex(rng.normal(), rng.normal())
            v1 = complex(rng.normal(), rng.normal())
            v2 = complex(rng.normal(), rng.normal())
            fwd = fisher_tensor(k, z, v1, v2)
            rev = fisher_tensor(k, z, v2, v1)
            assert fwd.sym == pytest.approx(rev.sym, abs=1e-12)
            assert fwd.antisym == pytest.approx(-rev.antisym, abs=1e-12)

    def test_real_bilinearity(self):
        rng = np.random.default_rng(37)
        for _ in range(50):
            k = rng.uniform(0.02, 0.49)
            z = complex(rng.normal(), rng.normal())
            v1, v2, v3 = (complex(rng.normal(), rng.normal()) for _ in range(3))
            a, b = rng.normal(), rng.normal()
            combo = fisher_tensor(k, z, a * v1 + b * v3, v2).value
            split = a * fisher_tensor(k, z, v1, v2).value + b * fisher_tensor(k, z, v3, v2).value
            assert combo == pytest.approx(split, abs=1e-12 * max(1, abs(split)))
            combo2 = fisher_tensor(k, z, v1, a * v2 + b * v3).value
            split2 = a * fisher_tensor(k, z, v1, v2).value + b * fisher_tensor(k, z, v1, v3).value
            assert combo2 == pytest.approx(split2, abs=1e-12 * max(1, abs(split2)))

    def test_general_matches_closed_form(self):
        rho = rho_of_kz(qubit_point(0.25, 0))
        value = fisher_tensor_general(rho, drho_sphere(0.25, 0, 1), drho_sphere(0.25, 0, 1j))
        assert value.value == pytest.approx(-0.5j, abs=1e-12)

    def test_diagonal_equals_qfi(self):
        rho = rho_of_kz(qubit_point(0.3, 0.7))
        drho = assemble_drho(0.3, 0.7, 0.2, 1 - 1j)
        value = fisher_tensor_general(rho, drho, drho)
        assert value.sym == pytest.approx(quantum_fisher(rho, drho), abs=1e-10)
        assert value.antisym == pytest.approx(0.0, abs=1e-12)

    def test_hermitian_symmetry(self):
        rho = rho_of_kz(qubit_point(0.3, 0.7))
        d1 = assemble_drho(0.3, 0.7, 0.2, 1 - 1j)
        d2 = assemble_drho(0.3, 0.7, -0.1, 0.4 + 2j)
        fwd = fisher_tensor_general(rho, d1, d2).value
        rev = fisher_tensor_general(rho, d2, d1).value
        assert fwd == pytest.approx(rev.conjugate(), abs=1e-12)

    def test_degenerate_state_is_real(self):
        rho = DensityOp(np.eye(2) / 2)
        d1 = np.array([[0.1, 0.2 + 0.3j], [0.2 - 0.3j, -0.1]])
        d2 = np.array([[-0.2, 0.5j], [-0.5j, 0.2]])
        assert fisher_tensor_general(rho, d1, d2).antisym == pytest.approx(0.0, abs=1e-12)

    def test_value_container(self):
        v = FisherTensorValue(3.0 - 2.0j)
        assert v.sym == 3.0 and v.antisym == -2.0


class TestPureQditFisher:
    def test_attaining_pair(self):
        outcomes = [np.array([1, 1]) / np.sqrt(2), np.array([1, -1]) / np.sqrt(2)]
        classical, quantum = pure_qdit_fisher([0, 0.5], outcomes)
        assert classical == pytest.approx(1.0, abs=1e-12)
        assert quantum == pytest.approx(1.0, abs=1e-12)

    def test_quantum_value_d3(self):
        outcomes = [np.eye(3)[i] for i in range(3)]
        _, quantum = pure_qdit_fisher([0.3j, 0.5, 0.2j], outcomes)
        assert quantum == pytest.approx(1.16, abs=1e-12)

    def test_no_orthogonal_motion(self):
        outcomes = [np.eye(2)[i] for i in range(2)]
        classical, quantum = pure_qdit_fisher([0.4j, 0.0], outcomes)
        assert classical == 0.0 and quantum == 0.0

    def test_completeness_enforced(self):
        with pytest.raises(NotAPovm):
            pure_qdit_fisher([0, 0.5], [np.array([1, 0]) / 2, np.array([0, 1]) / 2])

    def test_imaginary_a1_enforced(self):
        with pytest.raises(DomainError):
            pure_qdit_fisher([0.3, 0.5], [np.eye(2)[0], np.eye(2)[1]])

    def test_bound_over_random_draws(self):
        rng = np.random.default_rng(34)
        for _ in range(100):
            d = int(rng.integers(2, 5))
            a = rng.normal(size=d) + 1j * rng.normal(size=d)
            a[0] = 1j * rng.normal()
            g = rng.normal(size=(d + 1, d + 1)) + 1j * rng.normal(size=(d + 1, d + 1))
            q, _ = np.linalg.qr(g)
            classical, quantum = pure_qdit_fisher(a, list(q[:, :d]))
            assert classical <= quantum + 1e-9


class TestWavefunctionFisher:
    def test_two_outcome_example(self):
        grid = WavefunctionGrid(x=[0, 1], p=[0.5, 0.5], alpha=[0, 0], dp=[-0.5, 0.5], dalpha=[0, 0])
        assert wavefunction_fisher(grid) == (pytest.approx(1.0), pytest.approx(1.0))

    def test_phase_contribution(self):
        grid = WavefunctionGrid(x=[0, 1], p=[0.5, 0.5], alpha=[0, 0], dp=[-0.5, 0.5], dalpha=[0, 1])
        classical, quantum = wavefunction_fisher(grid)
        assert classical == pytest.approx(1.0)
        assert quantum == pytest.approx(1.25)

    def test_constant_density(self):
        grid = WavefunctionGrid(x=[0, 1, 2, 3], p=[0.25] * 4, alpha=[0] * 4, dp=[0] * 4, dalpha=[0] * 4)
        assert wavefunction_fisher(grid) == (0.0, 0.0)

    def test_normalization_enforced(self):
        with pytest.raises(NotNormalized):
            WavefunctionGrid(x=[0, 1], p=[0.5, 0.6], alpha=[0, 0], dp=[0, 0], dalpha=[0, 0])

    def test_uniform_grid_enforced(self):
        with pytest.raises(NotNormalized):
            WavefunctionGrid(x=[0, 1, 3], p=[0.25, 0.5, 0.25], alpha=[0] * 3, dp=[0] * 3, dalpha=[0] * 3)

    def test_negative_probability_rejected(self):
        with pytest.raises(NotNormalized):
            WavefunctionGrid(x=[0, 1], p=[1.1, -0.1], alpha=[0, 0], dp=[0, 0], dalpha=[0, 0])

    def test_quantum_at_least_classical(self):
        rng = np.random.default_rng(35)
        for _ in range(100):
            n = int(rng.integers(3, 20))
            dx = float(rng.uniform(0.1, 1.5))
            p = rng.uniform(0.05, 1.0, size=n)
            p /= p.sum() * dx
            grid = WavefunctionGrid(
                x=np.arange(n) * dx,
                p=p,
                alpha=rng.normal(size=n),
                dp=rng.normal(size=n),
                dalpha=rng.normal(size=n),
            )
            classical, quantum = wavefunction_fisher(grid)
            assert quantum >= classical - 1e-12


def test_mixing_suppression_against_pure_family():
    from qfg.sld import drho_sphere_pure
    from qfg.states import PureState, pure_projector, unitary_of_z

    rng = np.random.default_rng(36)
    for _ in range(100):
        k = rng.uniform(0.02, 0.5)
        z = complex(rng.normal(), rng.normal()) * rng.uniform(0, 3)
        v = complex(rng.normal(), rng.normal())
        mixed = quantum_fisher(rho_of_kz(qubit_point(k, z)), drho_sphere(k, z, v))
        psi = PureState(unitary_of_z(z)[:, 1])
        pure = quantum_fisher(pure_projector(psi), drho_sphere_pure(z, v))
        assert mixed == pytest.approx((1 - 2 * k) ** 2 * pure, abs=1e-9)


def test_eps_p_constant():
    assert EPS_P == 1e-12
