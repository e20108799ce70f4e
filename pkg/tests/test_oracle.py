import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.linalg import eigh_tridiagonal

from pdmho.errors import DomainError
from pdmho.harness.suites import refinement_ratios
from pdmho.model import ConfinedModel, energy, potential
from pdmho.oracle import (
    TridiagonalOperator,
    build_hamiltonian,
    compare_spectra,
    eigen_spectrum,
    flux_form_operator,
    sturm_count,
)

L5_LEVELS = (0.377964, 1.228378, 1.889822, 2.362278)


def _plain(diag, off, h=1.0):
    return TridiagonalOperator(np.asarray(diag, float), np.asarray(off, float), np.arange(len(diag)) * h, h)


def _longdouble_count(op, sigma):
    g = op.conductance.astype(np.longdouble)
    v = op.onsite.astype(np.longdouble)
    sigma = np.longdouble(sigma)
    s = g[0] + v[0] - sigma
    q = g[1] + s
    count = int(q < 0)
    for i in range(1, v.size):
        s = (v[i] - sigma) + g[i] * (s / q)
        q = g[i + 1] + s
        count += int(q < 0)
    return count


@pytest.fixture(scope="module")
def report_l5():
    return compare_spectra(ConfinedModel(5), 4000)


class TestOperator:
    def test_structure(self):
        model = ConfinedModel(3)
        op = build_hamiltonian(model, 100)
        assert op.size == 100 and op.off_diagonal.size == 99
        h = 2 * model.a / 101
        assert op.h == pytest.approx(h, rel=1e-15)
        np.testing.assert_allclose(op.grid, -model.a + h * np.arange(1, 101), rtol=0, atol=1e-14)
        dense = op.to_dense()
        np.testing.assert_array_equal(dense, dense.T)
        assert np.all(op.diagonal >= 0)

    def test_coefficients(self):
        model = ConfinedModel(4)
        op = build_hamiltonian(model, 50)
        h, a = op.h, model.a
        r = lambda x: (a * a - x * x) ** 2 / a**4
        half = -a + h * (np.arange(51) + 0.5)
        np.testing.assert_allclose(op.off_diagonal, -r(half[1:-1]) / (2 * h * h), rtol=1e-14)
        np.testing.assert_allclose(
            op.diagonal, (r(half[:-1]) + r(half[1:])) / (2 * h * h) + potential(op.grid), rtol=1e-14
        )
        # wall coupling uses the exact 1/M(-a + h/2), O((h/a)^2) of the central one
        assert op.conductance[0] == pytest.approx(r(-a + h / 2) / (2 * h * h), rel=1e-14)
        assert 0 < op.conductance[0] < 4 * (h / a) ** 2 * op.conductance[25]

    def test_matvec(self):
        op = build_hamiltonian(ConfinedModel(3), 40)
        v = np.random.default_rng(0).standard_normal(40)
        np.testing.assert_allclose(op.matvec(v), op.to_dense() @ v, rtol=1e-13)

    def test_grid_minimum(self):
        with pytest.raises(DomainError):
            build_hamiltonian(ConfinedModel(3), 15)

    def test_shape_validation(self):
        with pytest.raises(ValueError):
            _plain([1.0, 2.0, 3.0], [1.0])


class TestEigenSpectrum:
    def test_two_by_two(self):
        values, vectors = eigen_spectrum(_plain([2.0, 2.0], [-1.0]), 2)
        np.testing.assert_allclose(values, [1.0, 3.0], rtol=1e-14)
        assert np.all(vectors[:, 0] > 0)

    def test_laplacian(self):
        n = 400
        h = 1.0 / (n + 1)
        exact = [4 / h**2 * math.sin(k * math.pi * h / 2) ** 2 for k in (1, 2, 3)]
        # as plain d, e entries the small eigenvalues are only defined to ~eps |d| / lambda
        plain, _ = eigen_spectrum(_plain(np.full(n, 2 / h**2), np.full(n - 1, -1 / h**2), h), 3)
        np.testing.assert_allclose(plain, exact, rtol=1e-10)
        flux = flux_form_operator(0.0, 1.0, n, np.ones_like, np.zeros_like, hbar=math.sqrt(2.0))
        np.testing.assert_allclose(flux.diagonal, 2 / h**2, rtol=1e-13)
        values, _ = eigen_spectrum(flux, 3)
        np.testing.assert_allclose(values, exact, rtol=1e-12)
        assert abs(values[0] - math.pi**2) <= 2 * math.pi**4 * h * h / 12

    def test_count_range(self):
        op = _plain([2.0, 2.0], [-1.0])
        for c in (0, 3):
            with pytest.raises(DomainError):
                eigen_spectrum(op, c)

    def test_normalization_and_sign(self):
        op = build_hamiltonian(ConfinedModel(4), 300)
        _, vectors = eigen_spectrum(op, 3)
        for v in vectors:
            assert op.h * np.sum(v * v) == pytest.approx(1.0, rel=1e-12)
            lead = np.flatnonzero(np.abs(v) > 1e-8 * np.abs(v).max())[0]
            assert v[lead] > 0
        gram = op.h * vectors @ vectors.T
        np.testing.assert_allclose(gram, np.eye(3), atol=1e-10)

    def test_residual(self):
        op = build_hamiltonian(ConfinedModel(5), 800)
        values, vectors = eigen_spectrum(op, 4)
        for lam, v in zip(values, vectors):
            assert np.linalg.norm(op.matvec(v) - lam * v) <= 1e-9 * abs(lam) * np.linalg.norm(v)

    def test_deterministic(self):
        op = build_hamiltonian(ConfinedModel(5), 500)
        v1, w1 = eigen_spectrum(op, 4)
        v2, w2 = eigen_spectrum(op, 4)
        assert v1.tobytes() == v2.tobytes() and w1.tobytes() == w2.tobytes()

    def test_agrees_with_lapack(self):
        op = build_hamiltonian(ConfinedModel(7), 2000)
        ours, _ = eigen_spectrum(op, 6)
        ref = eigh_tridiagonal(op.diagonal, op.off_diagonal, eigvals_only=True, select="i", select_range=(0, 5))
        # LAPACK works on d, e and loses ~1e-9 to the large diagonal
        np.testing.assert_allclose(ours, ref, rtol=1e-8)

    def test_extended_precision_bracket(self):
        # the 1e-12 relative contract, checked by counting in long double
        op = build_hamiltonian(ConfinedModel(5), 4000)
        values, _ = eigen_spectrum(op, 4)
        for k, lam in enumerate(values):
            assert _longdouble_count(op, lam * (1 - 1e-12)) == k
            assert _longdouble_count(op, lam * (1 + 1e-12)) == k + 1

    def test_sturm_count_plain(self):
        op = _plain([2.0, 2.0, 2.0], [-1.0, -1.0])
        # eigenvalues 2 - sqrt2, 2, 2 + sqrt2
        np.testing.assert_array_equal(sturm_count(op, [0.0, 1.0, 2.5, 4.0]), [0, 1, 2, 3])

    @settings(max_examples=20, deadline=None)
    @given(
        data=st.lists(st.floats(-5, 5), min_size=3, max_size=12),
        seed=st.integers(0, 1000),
    )
    def test_random_symmetric(self, data, seed):
        n = len(data)
        off = np.random.default_rng(seed).uniform(0.1, 2.0, n - 1)
        op = _plain(data, -off)
        values, vectors = eigen_spectrum(op, n)
        dense = op.to_dense()
        np.testing.assert_allclose(values, np.linalg.eigvalsh(dense), rtol=1e-10, atol=1e-11)
        assert np.all(np.diff(values) > 0)
        assert np.all(np.isfinite(vectors))
        np.testing.assert_allclose(vectors @ vectors.T, np.eye(n), atol=1e-8)
        np.testing.assert_allclose(dense @ vectors.T, vectors.T * values, atol=1e-8)

    def test_shift_on_exact_eigenvalue(self):
        # zero diagonal: 0 is an exact eigenvalue of every odd leading block
        values, vectors = eigen_spectrum(_plain([0.0, 0.0, 0.0], [-1.0, -1.0]), 3)
        np.testing.assert_allclose(values, [-math.sqrt(2), 0.0, math.sqrt(2)], atol=1e-14)
        assert np.all(np.isfinite(vectors))


class TestCompareSpectra:
    def test_l2_ground(self):
        rep = compare_spectra(ConfinedModel(2), 4000)
        assert len(rep.numeric) == 1
        assert rep.analytic == [0.25]
        assert rep.rel_errors[0] <= 1e-5
        assert rep.eigenvector_overlaps[0] >= 1 - 1e-6

    def test_l5_levels(self, report_l5):
        assert len(report_l5.numeric) == 4
        np.testing.assert_allclose(report_l5.numeric, L5_LEVELS, rtol=1e-5)
        assert max(report_l5.rel_errors) <= 1e-5
        assert all(0 <= o <= 1 for o in report_l5.eigenvector_overlaps)

    def test_report_lengths(self, report_l5):
        n = len(report_l5.analytic)
        for field in ("numeric", "abs_errors", "rel_errors", "eigenvector_overlaps"):
            assert len(getattr(report_l5, field)) == n
        rows = list(report_l5.as_rows())
        assert [r["m"] for r in rows] == [5, 4, 3, 2]

    def test_overlaps_up_to_l7(self):
        for l in range(2, 8):
            rep = compare_spectra(ConfinedModel(l), 4000)
            assert min(rep.eigenvector_overlaps) >= 1 - 1e-5, l

    @pytest.mark.parametrize("l", [2, 5, 7])
    def test_bound_count(self, l):
        rep = compare_spectra(ConfinedModel(l), 2000, extra=1)
        assert len(rep.numeric) == l - 1
        assert all(e < rep.edge_energy for e in rep.numeric)
        assert rep.edge_energy == pytest.approx(energy(l, 1), rel=1e-15)
        assert len(rep.unvalidated) == 1 and rep.unvalidated[0] > rep.numeric[-1]

    def test_states_argument(self):
        rep = compare_spectra(ConfinedModel(5), 500, states=2)
        assert len(rep.numeric) == 2
        with pytest.raises(DomainError):
            compare_spectra(ConfinedModel(5), 500, states=5)

    @pytest.mark.parametrize("l", [2, 5])
    def test_second_order_convergence(self, l):
        for ratio in refinement_ratios(l):
            assert 3.5 <= ratio <= 4.5

    def test_convergence_l7_approaches_second_order(self):
        # the m = 2 state approaches order two from below (see notes)
        coarse = refinement_ratios(7, 500)
        fine = refinement_ratios(7, 1000)
        assert all(3.5 <= r <= 4.5 for r in fine[:-1])
        assert coarse[-1] < fine[-1] < 4.0

    def test_constant_mass_box(self):
        op = flux_form_operator(-12.0, 12.0, 4000, lambda x: np.ones_like(x), lambda x: 0.5 * x * x)
        values, _ = eigen_spectrum(op, 6)
        np.testing.assert_allclose(values, np.arange(6) + 0.5, atol=1e-4)
