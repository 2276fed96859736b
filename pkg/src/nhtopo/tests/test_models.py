#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026

from unittest import TestCase

import numpy as np

from src.nhtopo.core import HamiltonianFamily
from src.nhtopo.errors import ContractViolation, UnknownId
from src.nhtopo.models import (EXEMPLARS, block_harnesses, catalog_family, catalog_get, catalog_ids,
                               class_representative, exemplar_family, exemplar_relation, scalar_point_gap_dimension,
                               scalar_solution_dimension, verify_block)
from src.nhtopo.symmetry import (SymmetryKind, SymmetryOp, SymmetrySpec, catalog, detect_class,
                                 spectral_symmetry_residual, verify_symmetry)

K = SymmetryKind


class TestClassRepresentative(TestCase):
    def test_every_class_is_detected(self):
        for c in catalog():
            for prefer in ('S', 'eta'):
                with self.subTest(c=c.name, prefer=prefer):
                    self.assertEqual(detect_class(class_representative(c, prefer)), c)

    def test_rejects_unknown_preference(self):
        with self.assertRaises(ContractViolation):
            class_representative('A+S', 'T')


class TestScalarSolutions(TestCase):
    def test_dimensions(self):
        self.assertEqual(scalar_solution_dimension(SymmetrySpec()), 2)
        self.assertEqual(scalar_solution_dimension(SymmetrySpec([SymmetryOp(K.TRS, [[1]])])), 1)
        self.assertEqual(scalar_solution_dimension(SymmetrySpec([SymmetryOp(K.PH, [[1]])])), 1)
        self.assertEqual(scalar_solution_dimension(SymmetrySpec([SymmetryOp(K.SLS, [[1]])])), 0)

    def test_bdi_has_no_scalar_model(self):
        self.assertEqual(scalar_point_gap_dimension(0., 0.), 0)
        self.assertEqual(scalar_point_gap_dimension(.3, 2.1), 0)

    def test_needs_scalar_operators(self):
        with self.assertRaises(ContractViolation):
            scalar_solution_dimension(SymmetrySpec([SymmetryOp(K.TRS, np.eye(2))]))


class TestBuildingBlocks(TestCase):
    def test_every_block_is_verified(self):
        self.assertEqual(sorted(block_harnesses()), list(range(1, 19)))
        for index in range(1, 19):
            with self.subTest(block=index):
                report = verify_block(index)
                self.assertTrue(report.passed, [check._asdict() for check in report.failures()])
                self.assertEqual(report.index, index)

    def test_zero_block(self):
        report = verify_block('D^\\dag')
        self.assertEqual(report.index, 3)
        self.assertEqual(report.measured, [[0]])
        self.assertEqual(report.to_dict()['expected'], [[0]])

    def test_bdi_block_checks_scalar_models(self):
        report = verify_block('BDI')
        self.assertIn('no 1x1 point gapped model', [check.name for check in report.checks])
        self.assertTrue(report.passed)

    def test_exemplar_is_not_a_block(self):
        with self.assertRaises(UnknownId):
            verify_block('hatano')


class TestExemplars(TestCase):
    def test_families_satisfy_their_symmetries(self):
        for name in EXEMPLARS:
            H, spec = exemplar_family(name)
            for op in spec:
                self.assertLess(verify_symmetry(H, op), 1e-10)

    def test_parameters(self):
        H, _ = exemplar_family('hatano', {'t_left': 2.}, grid_size=32)
        self.assertEqual(H.grid_size, 32)
        self.assertAlmostEqual(H.samples[0, 0, 0].real, 3.)
        with self.assertRaises(ContractViolation):
            exemplar_family('hatano', {'gamma': 1.})
        with self.assertRaises(UnknownId):
            exemplar_family('kitaev')

    def test_wire_blocks_carry_opposite_windings(self):
        for axis in ('real', 'imaginary'):
            with self.subTest(axis=axis):
                report = exemplar_relation('a+s-wire', axis)
                self.assertEqual(report.relation, -1)
                self.assertEqual(abs(report.first.value), 1)

    def test_chern_blocks(self):
        real = exemplar_relation('aiii+s-chern', 'real')
        self.assertEqual(real.relation, 1)
        self.assertEqual(abs(real.first.value), 1)
        imaginary = exemplar_relation('aiii+s-chern', 'imaginary')
        self.assertEqual(imaginary.relation, -1)
        self.assertEqual(imaginary.to_dict()['relation'], -1)

    def test_relation_needs_sublattice_blocks(self):
        with self.assertRaises(UnknownId):
            exemplar_relation('hatano', 'real')


class TestCatalog(TestCase):
    def test_ids(self):
        ids = catalog_ids()
        self.assertEqual(ids[:18], [str(i) for i in range(1, 19)])
        self.assertEqual(ids[18:], list(EXEMPLARS))

    def test_lookup(self):
        self.assertEqual(catalog_get('2').class_name, 'AI')
        self.assertEqual(catalog_get('AI').id, '2')
        self.assertEqual(catalog_get('DIII+S_+-').id, '16')
        entry = catalog_get('hatano')
        self.assertEqual(entry.class_name, 'A')
        self.assertIsNone(entry.harness)
        self.assertEqual(catalog_get('a+s-wire').class_name, 'A+S')

    def test_unknown_ids(self):
        for key in ('19', 'A', 'nope'):
            with self.subTest(key=key):
                with self.assertRaises(UnknownId):
                    catalog_get(key)

    def test_block_family(self):
        H, spec = catalog_family('2', {'generator': 'point', 'index': 0, 'label': 'H1'})
        self.assertEqual(H.dim, 0)
        for op in spec:
            self.assertLess(verify_symmetry(H, op), 1e-10)
        with self.assertRaises(ContractViolation):
            catalog_family('2', {'colour': 'red'})
        with self.assertRaises(ContractViolation):
            catalog_family('2', {'generator': 'hermitian', 'index': 7})


class TestSpectralSymmetry(TestCase):
    def test_block_generators(self):
        for index, harness in block_harnesses().items():
            for model in harness.hermitian + harness.point:
                for j, h in enumerate(model.hamiltonians):
                    family = HamiltonianFamily.from_matrix(h)
                    for name, op in model.ops.items():
                        with self.subTest(block=index, model=model.label, H=j, op=name):
                            self.assertLess(spectral_symmetry_residual(family, op), 1e-6)

    def test_exemplars(self):
        for name in EXEMPLARS:
            H, spec = exemplar_family(name)
            for op in spec:
                with self.subTest(exemplar=name, op=op.kind.label):
                    self.assertLess(spectral_symmetry_residual(H, op), 1e-8)
