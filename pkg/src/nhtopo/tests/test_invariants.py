#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026

from unittest import TestCase

import numpy as np

from src.nhtopo.core import HamiltonianFamily, sigma_x, sigma_z
from src.nhtopo.errors import (ContractViolation, Gapless, NotHermitian, NotInvertible, NotRealizable,
                               ReferenceOnSpectrum, Singular, Unquantized)
from src.nhtopo.invariants import (SIGN_DET_GAUGES, chern_2d, det_winding_point_gap, pfaffian_value, sign_det,
                                   sign_pf, signature_0d, winding_1d, z2_pair)
from src.nhtopo.models import exemplar_family
from src.nhtopo.symmetry import verify_symmetry

J = np.array([[0., 1.], [-1., 0.]])


def _wire(fn, grid_size):
    return HamiltonianFamily.from_function(fn, dim=1, grid_size=grid_size)


class TestWinding(TestCase):
    def test_unit_winding(self):
        value = winding_1d(_wire(lambda k: [[np.exp(1j * k[0])]], 8))
        self.assertEqual(value.value, 1)
        self.assertLess(value.residual, 1e-12)
        self.assertTrue(value.trusted)

    def test_determinant_of_a_block(self):
        value = winding_1d(_wire(lambda k: np.exp(-2j * k[0]) * np.eye(2), 16))
        self.assertEqual(value.value, -4)

    def test_not_invertible(self):
        with self.assertRaises(NotInvertible):
            winding_1d(_wire(lambda k: [[np.cos(k[0])]], 8))

    def test_coarse_grid(self):
        with self.assertRaises(Unquantized):
            winding_1d(_wire(lambda k: [[np.exp(4j * k[0])]], 8))
        with self.assertRaises(ContractViolation):
            winding_1d(_wire(lambda k: [[np.exp(1j * k[0])]], 6))

    def test_point_gap_winding(self):
        hatano = lambda left: _wire(lambda k: [[np.exp(1j * k[0]) + left * np.exp(-1j * k[0])]], 16)
        self.assertEqual(det_winding_point_gap(hatano(0.)).value, 1)
        self.assertEqual(det_winding_point_gap(hatano(2.)).value, -1)
        self.assertEqual(det_winding_point_gap(hatano(0.), e_ref=2.).value, 0)
        self.assertEqual(det_winding_point_gap(hatano(0.)).kind, 'det_winding')

    def test_reference_on_spectrum(self):
        with self.assertRaises(ReferenceOnSpectrum):
            det_winding_point_gap(_wire(lambda k: [[np.exp(1j * k[0])]], 16), e_ref=1.)

    def test_additive_under_direct_sums(self):
        first = _wire(lambda k: [[np.exp(1j * k[0]) + .3]], 16)
        second = _wire(lambda k: [[2 * np.exp(-2j * k[0]) + .5 * np.exp(1j * k[0])]], 16)
        self.assertEqual(winding_1d(first).value, 1)
        self.assertEqual(winding_1d(second).value, -2)
        self.assertEqual(winding_1d(first.direct_sum(second)).value, -1)

    def test_refined_grid_keeps_the_value(self):
        for grid_size in (16, 32, 64):
            hatano, _ = exemplar_family('hatano', {'t_left': 2.}, grid_size=grid_size)
            self.assertEqual(det_winding_point_gap(hatano).value, -1)
            wire = _wire(lambda k: [[np.exp(2j * k[0]) - .4 * np.exp(-1j * k[0])]], grid_size)
            self.assertEqual(winding_1d(wire).value, 2)

    def test_stable_under_sublattice_preserving_perturbations(self):
        rng = np.random.default_rng(43)
        H, spec = exemplar_family('a+s-wire')
        sls = spec.get('SLS')
        for _ in range(20):
            c = rng.normal(size=(3, 2, 2)) + 1j * rng.normal(size=(3, 2, 2))

            def noise(k):
                m = c[0] + c[1] * np.exp(1j * k[0]) + c[2] * np.exp(-1j * k[0])
                return (m - sls.matrix @ m @ sls.matrix) / 2

            delta = HamiltonianFamily.from_function(noise, 1, H.grid_size)
            scale = np.linalg.norm(delta.samples, 2, axis=(-2, -1)).max()
            perturbed = H + (.05 / scale) * delta
            self.assertLess(verify_symmetry(perturbed, sls), 1e-12)
            self.assertEqual(winding_1d(perturbed.map(lambda m: m[:1, 1:])).value, 1)
            self.assertEqual(winding_1d(perturbed.map(lambda m: m[1:, :1])).value, -1)

    def test_hermitian_family_has_no_point_gap_winding(self):
        h = _wire(lambda k: np.diag([1., -1.]) + .1 * np.cos(k[0]) * np.eye(2) + .1 * np.sin(k[0]) * sigma_x, 16)
        for e_ref in (0., .5, -3.):
            self.assertEqual(det_winding_point_gap(h, e_ref=e_ref).value, 0)


class TestChern(TestCase):
    def test_qwz_phases(self):
        for mass, expected in ((1., 1), (-1., -1), (3., 0)):
            H, _ = exemplar_family('qwz-chern', {'mass': mass})
            self.assertEqual(chern_2d(H).value, expected)

    def test_gapless(self):
        H, _ = exemplar_family('qwz-chern', {'mass': 2.})
        with self.assertRaises(Gapless):
            chern_2d(H)

    def test_not_hermitian(self):
        H, _ = exemplar_family('qwz-chern', {'mass': 1.})
        with self.assertRaises(NotHermitian):
            chern_2d(1j * H)

    def test_additive_under_direct_sums(self):
        families = {mass: exemplar_family('qwz-chern', {'mass': mass})[0] for mass in (1., -1., 3.)}
        self.assertEqual(chern_2d(families[1.].direct_sum(families[1.])).value, 2)
        self.assertEqual(chern_2d(families[1.].direct_sum(families[-1.])).value, 0)
        self.assertEqual(chern_2d(families[-1.].direct_sum(families[3.])).value, -1)

    def test_refined_grid_keeps_the_value(self):
        for grid_size in (12, 24, 48):
            H, _ = exemplar_family('qwz-chern', {'mass': 1.}, grid_size=grid_size)
            value = chern_2d(H)
            self.assertEqual(value.value, 1)
            self.assertLess(value.residual, 1e-6)

    def test_stable_under_small_perturbations(self):
        rng = np.random.default_rng(29)
        H, _ = exemplar_family('qwz-chern', {'mass': 1.})
        for _ in range(20):
            b = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
            b = (b + b.conj().T) / 2
            perturbation = HamiltonianFamily.from_function(lambda k: .1 * b / np.linalg.norm(b, 2), 2, H.grid_size)
            self.assertEqual(chern_2d(H + perturbation).value, 1)

    def test_needs_two_dimensions(self):
        with self.assertRaises(ContractViolation):
            chern_2d(_wire(lambda k: sigma_z, 8))


class TestZeroDimensional(TestCase):
    def test_signature(self):
        self.assertEqual(signature_0d(np.diag([1., -2., -3.])).value, 2)
        self.assertEqual(signature_0d(HamiltonianFamily.from_matrix(sigma_x)).value, 1)
        with self.assertRaises(NotHermitian):
            signature_0d([[0, 1], [0, 0]])
        with self.assertRaises(Gapless):
            signature_0d(np.diag([1., 0.]))

    def test_sign_det(self):
        self.assertEqual(sign_det(sigma_x).value, -1)
        self.assertEqual(sign_det(1j * np.diag([1., 2.]), phase=-1j).value, 1)
        with self.assertRaises(NotRealizable):
            sign_det(1j * np.eye(2), phase=1.)
        with self.assertRaises(Singular):
            sign_det(np.diag([1., 0.]))

    def test_sign_det_picks_a_supported_gauge(self):
        self.assertEqual(SIGN_DET_GAUGES, (1., -1j))
        self.assertEqual(sign_det([[-2.]]).value, -1)
        self.assertEqual(sign_det([[1j]]).value, 1)
        self.assertEqual(sign_det([[-1j]]).value, -1)
        self.assertEqual(sign_det(HamiltonianFamily.from_matrix([[1j]])).value, 1)
        with self.assertRaises(NotRealizable):
            sign_det(np.exp(.3j) * np.eye(2))
        with self.assertRaises(NotRealizable):
            sign_det(np.diag([1., 1j]))

    def test_pfaffian(self):
        self.assertAlmostEqual(pfaffian_value(J), 1.)
        self.assertAlmostEqual(pfaffian_value(np.kron(np.diag([2., 3.]), J)), 6.)
        self.assertEqual(pfaffian_value(np.zeros((0, 0))), 1.)
        self.assertEqual(sign_pf(-J).value, -1)
        with self.assertRaises(ContractViolation):
            pfaffian_value(np.eye(2))
        with self.assertRaises(Singular):
            sign_pf(np.zeros((3, 3)))

    def test_z2_pair_relative_sign(self):
        a, b = z2_pair([[0, 2], [-3, 0]], sigma_z).value
        self.assertEqual(a * b, -1)
        a, b = z2_pair(2 * sigma_x, sigma_z).value
        self.assertEqual(a * b, 1)
        with self.assertRaises(NotRealizable):
            z2_pair(sigma_x, 1j * sigma_z)
