#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026

from unittest import TestCase

import numpy as np
import numpy.testing as npt
from scipy.linalg import block_diag, eigvalsh, svdvals
from scipy.stats import unitary_group

from src.nhtopo.core import HamiltonianFamily, sigma_z
from src.nhtopo.errors import ContractViolation, NearDefective, NoLineGap, SymmetryBroken
from src.nhtopo.gaps import flatten, gap_report, hermitize, line_gap_deform, spectrum_frame
from src.nhtopo.invariants import det_winding_point_gap, signature_0d
from src.nhtopo.models import exemplar_family
from src.nhtopo.symmetry import SymmetryKind, SymmetryOp, SymmetrySpec, verify_symmetry


def _random_hermitian(rng, n):
    b = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (b + b.conj().T) / 2


def _sublattice(n):
    return np.kron(sigma_z.real, np.eye(n))


class TestGapReport(TestCase):
    def test_margins(self):
        report = gap_report(HamiltonianFamily.from_matrix(np.diag([1., -2.])))
        self.assertAlmostEqual(report.point_gap_margin, 1.)
        self.assertAlmostEqual(report.real_line_margin, 1.)
        self.assertAlmostEqual(report.imag_line_margin, 0.)
        self.assertTrue(report.point_gapped)
        self.assertTrue(report.real_line_gapped)
        self.assertFalse(report.imag_line_gapped)
        self.assertEqual(report.line_margin('imag'), report.imag_line_margin)

    def test_point_gap_without_line_gap(self):
        report = gap_report(HamiltonianFamily.from_matrix(np.diag([1., 1j])))
        self.assertTrue(report.point_gapped)
        self.assertFalse(report.real_line_gapped)
        self.assertFalse(report.imag_line_gapped)

    def test_rejects_bad_tolerance(self):
        with self.assertRaises(ContractViolation):
            gap_report(HamiltonianFamily.from_matrix(np.eye(2)), tol=0.)


class TestHermitize(TestCase):
    def test_spectrum_is_plus_minus_singular_values(self):
        rng = np.random.default_rng(5)
        for _ in range(100):
            h = rng.normal(size=(3, 3)) + 1j * rng.normal(size=(3, 3))
            doubled = hermitize(HamiltonianFamily.from_matrix(h)).matrix
            npt.assert_allclose(doubled, doubled.conj().T)
            s = svdvals(h)
            npt.assert_allclose(eigvalsh(doubled), np.sort(np.concatenate([-s, s])), atol=1e-10)
            npt.assert_allclose(_sublattice(3) @ doubled @ _sublattice(3), -doubled, atol=1e-14)

    def test_flattened_family_doubles_to_a_gapped_chiral_family(self):
        for axis, ratio in (('real', .5), ('imaginary', -.5)):
            H, _ = exemplar_family('a+s-wire', {'ratio': ratio})
            with self.subTest(axis=axis):
                doubled = hermitize(flatten(H, axis))
                self.assertTrue(doubled.is_hermitian(1e-10))
                chiral = SymmetryOp(SymmetryKind.CS, _sublattice(H.size))
                self.assertLess(verify_symmetry(doubled, chiral), 1e-12)
                report = gap_report(doubled)
                self.assertGreater(report.real_line_margin, 1e-3)
                self.assertLess(report.imag_line_margin, 1e-8)


class TestFlatten(TestCase):
    def test_real_axis(self):
        h = HamiltonianFamily.from_matrix([[1, 2], [0, -3]])
        q = flatten(h).matrix
        npt.assert_allclose(q @ q, np.eye(2), atol=1e-12)
        npt.assert_allclose(np.sort(np.linalg.eigvals(q).real), [-1, 1], atol=1e-12)
        npt.assert_allclose(q @ h.matrix, h.matrix @ q, atol=1e-12)

    def test_imaginary_axis_squares_to_minus_one(self):
        h = HamiltonianFamily.from_matrix([[1j, 1], [0, -2j]])
        q = flatten(h, 'imaginary').matrix
        npt.assert_allclose(q @ q, -np.eye(2), atol=1e-12)
        npt.assert_allclose(flatten(h, 'imag').matrix, q)

    def test_no_line_gap(self):
        with self.assertRaises(NoLineGap):
            flatten(HamiltonianFamily.from_matrix(np.diag([1j, -1j])), 'real')
        with self.assertRaises(NoLineGap):
            flatten(HamiltonianFamily.from_matrix(np.diag([1., -1.])), 'imaginary')

    def test_near_defective(self):
        with self.assertRaises(NearDefective):
            flatten(HamiltonianFamily.from_matrix([[1, 1], [0, 1 + 1e-12]]))

    def test_unitary_covariance_and_singular_values(self):
        rng = np.random.default_rng(31)
        for _ in range(30):
            u = unitary_group.rvs(3, random_state=rng)
            energies = rng.uniform(.5, 2., size=3) * np.array([1, -1, 1]) + 1j * rng.normal(size=3)
            normal = u @ np.diag(energies) @ u.conj().T
            q = flatten(HamiltonianFamily.from_matrix(normal)).matrix
            npt.assert_allclose(svdvals(q), np.ones(3), atol=1e-8)
            npt.assert_allclose(u.conj().T @ q @ u, np.diag(np.sign(energies.real)), atol=1e-8)

            skew = u @ (np.diag(energies) + .3 * np.triu(rng.normal(size=(3, 3)), 1)) @ u.conj().T
            q = flatten(HamiltonianFamily.from_matrix(skew)).matrix
            self.assertAlmostEqual(svdvals(q).min(), 1 / np.linalg.norm(q, 2))

    def test_unknown_axis(self):
        with self.assertRaises(ContractViolation):
            flatten(HamiltonianFamily.from_matrix(np.eye(2)), 'diagonal')


class TestLineGapDeform(TestCase):
    def test_pseudo_hermitian_matrices_deform_to_hermitian(self):
        rng = np.random.default_rng(17)
        eta = np.diag([1., 1., -1., -1.])
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.PH, eta)])
        for _ in range(50):
            b = _random_hermitian(rng, 4)
            h = HamiltonianFamily.from_matrix(eta @ (np.diag([1.5, -2., 1.2, -1.7]) + .05 * b / np.linalg.norm(b, 2)))
            target = line_gap_deform(h, 'real', spec)
            self.assertTrue(target.is_hermitian(1e-10))
            self.assertLess(verify_symmetry(target, spec.get('pH')), 1e-8)
            self.assertEqual(signature_0d(target).value, int(np.sum(np.linalg.eigvals(h.matrix).real < 0)))

    def test_real_matrices_deform_to_anti_hermitian(self):
        rng = np.random.default_rng(23)
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.TRS, np.eye(4))])
        for _ in range(50):
            r = np.eye(4) + .1 * rng.normal(size=(4, 4))
            blocks = block_diag(*[[[a, b], [-b, a]] for a, b in rng.uniform(.5, 2., size=(2, 2))])
            h = HamiltonianFamily.from_matrix(r @ blocks @ np.linalg.inv(r))
            target = line_gap_deform(h, 'imaginary', spec)
            npt.assert_allclose(target.matrix, -target.matrix.conj().T, atol=1e-10)
            self.assertLess(verify_symmetry(target, spec.get('TRS')), 1e-8)
            self.assertGreater(gap_report(target).imag_line_margin, .1)

    def test_pseudo_hermitian_families_deform_to_hermitian(self):
        rng = np.random.default_rng(19)
        eta = np.diag([1., 1., -1., -1.])
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.PH, eta)])
        for _ in range(50):
            parts = [_random_hermitian(rng, 4) for _ in range(3)]
            parts = [.05 * b / (3 * np.linalg.norm(b, 2)) for b in parts]
            h = HamiltonianFamily.from_function(
                lambda k: eta @ (np.diag([1.5, -2., 1.2, -1.7]) + parts[0] + parts[1] * np.cos(k[0])
                                 + parts[2] * np.sin(k[0])), dim=1, grid_size=8)
            target = line_gap_deform(h, 'real', spec, steps=11)
            self.assertTrue(target.is_hermitian(1e-10))
            self.assertLess(verify_symmetry(target, spec.get('pH')), 1e-8)
            for m, t in zip(h.flat(), target.flat()):
                self.assertEqual(signature_0d(t).value, int(np.sum(np.linalg.eigvals(m).real < 0)))
            self.assertEqual(det_winding_point_gap(flatten(h)).value, det_winding_point_gap(h).value)

    def test_time_reversal_families_deform_to_anti_hermitian(self):
        rng = np.random.default_rng(37)
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.TRS, np.eye(4))])
        for _ in range(50):
            r0, r1 = rng.normal(size=(4, 4)), rng.normal(size=(4, 4))
            blocks = block_diag(*[[[a, b], [-b, a]] for a, b in rng.uniform(.5, 2., size=(2, 2))])

            def bloch(k):
                r = np.eye(4) + .05 * (r0 * np.cos(k[0]) + 1j * r1 * np.sin(k[0]))
                return r @ blocks @ np.linalg.inv(r)

            h = HamiltonianFamily.from_function(bloch, dim=1, grid_size=8)
            self.assertLess(verify_symmetry(h, spec.get('TRS')), 1e-10)
            target = line_gap_deform(h, 'imaginary', spec, steps=11)
            npt.assert_allclose(target.samples, -np.swapaxes(target.samples.conj(), -1, -2), atol=1e-10)
            self.assertLess(verify_symmetry(target, spec.get('TRS')), 1e-8)
            self.assertGreater(gap_report(target).imag_line_margin, .1)
            self.assertEqual(det_winding_point_gap(flatten(h, 'imaginary')).value, det_winding_point_gap(h).value)

    def test_input_must_satisfy_the_symmetries(self):
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.SLS, sigma_z)])
        with self.assertRaises(SymmetryBroken):
            line_gap_deform(HamiltonianFamily.from_matrix(np.diag([1., -1.])), 'real', spec)

    def test_needs_two_steps(self):
        with self.assertRaises(ContractViolation):
            line_gap_deform(HamiltonianFamily.from_matrix(np.diag([1., -1.])), 'real', SymmetrySpec(), steps=1)


class TestSpectrumFrame(TestCase):
    def test_columns(self):
        h = HamiltonianFamily.from_function(lambda k: np.diag([np.exp(1j * k[0]), 2.]), dim=1, grid_size=8)
        frame = spectrum_frame(h)
        self.assertEqual(list(frame.columns), ['k0', 'band', 're', 'im'])
        self.assertEqual(len(frame), 16)
        self.assertEqual(len(spectrum_frame(HamiltonianFamily.from_matrix(np.eye(3)))), 3)
