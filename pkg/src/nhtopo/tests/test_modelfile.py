#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026

import json
import os
import tempfile
from unittest import TestCase

import numpy as np
import numpy.testing as npt

from src.nhtopo.core import sigma_y, sigma_z
from src.nhtopo.errors import ContractViolation, UnknownId
from src.nhtopo.modelfile import ModelFile
from src.nhtopo.models import exemplar_family
from src.nhtopo.symmetry import SymmetryKind, SymmetryOp, SymmetrySpec, detect_class


class TestModelFile(TestCase):
    def test_sampled_round_trip(self):
        H, spec = exemplar_family('a+s-wire')
        model = ModelFile.from_dict(json.loads(json.dumps(ModelFile.from_family(H, spec).to_dict())))
        npt.assert_allclose(model.family().samples, H.samples)
        self.assertEqual(detect_class(model.spec()).name, 'A+S')

    def test_commutation_signs_are_stored_once(self):
        spec = SymmetrySpec([SymmetryOp(SymmetryKind.TRS, np.eye(2)), SymmetryOp(SymmetryKind.SLS, sigma_z)])
        H, _ = exemplar_family('a+s-wire')
        data = ModelFile.from_family(H, spec).to_dict()
        signs = [entry['commutation_signs'] for entry in data['symmetries']]
        self.assertEqual(signs, [{'TRS,SLS': 1}, {}])

    def test_save_and_load(self):
        H, spec = exemplar_family('hatano', {'t_left': .5})
        with tempfile.TemporaryDirectory() as tmp:
            path = os.path.join(tmp, 'models', 'hatano.json')
            ModelFile.from_family(H, spec).save(path)
            model = ModelFile.load(path)
        self.assertEqual((model.dim, model.grid_size, model.size), (1, 16, 1))
        npt.assert_allclose(model.family().samples, H.samples)

    def test_catalog_reference(self):
        model = ModelFile.from_dict({'dim': 2, 'grid_size': 16, 'size': 4,
                                     'catalog': {'name': 'aiii+s-chern', 'params': {'mass': 1.}}})
        self.assertEqual(model.family().size, 4)
        self.assertEqual(detect_class(model.spec()).name, 'AIII+S_-,\\eta_-')
        self.assertEqual(model.to_dict()['catalog']['name'], 'aiii+s-chern')

    def test_block_reference(self):
        model = ModelFile.from_dict({'dim': 0, 'grid_size': 1, 'size': 1,
                                     'catalog': {'name': 'AI', 'params': {'generator': 'point'}}})
        self.assertEqual(model.family().dim, 0)

    def test_catalog_shape_mismatch(self):
        model = ModelFile.from_dict({'dim': 1, 'grid_size': 16, 'size': 2, 'catalog': {'name': 'hatano'}})
        with self.assertRaises(ContractViolation):
            model.family()
        with self.assertRaises(UnknownId):
            ModelFile.from_dict({'dim': 1, 'grid_size': 16, 'size': 1, 'catalog': {'name': 'nope'}}).family()

    def test_invalid_files(self):
        with self.assertRaises(ContractViolation):
            ModelFile.from_dict({'dim': 1, 'grid_size': 8})
        with self.assertRaises(ContractViolation):
            ModelFile.from_dict({'dim': 0, 'grid_size': 1, 'size': 1})
        with self.assertRaises(ContractViolation):
            ModelFile.from_dict({'dim': 0, 'grid_size': 1, 'size': 2, 'samples': [[[1, 0]]]})
        with self.assertRaises(ContractViolation):
            ModelFile.from_dict({'dim': 0, 'grid_size': 1, 'size': 1, 'samples': [[1]]})
        with self.assertRaises(ContractViolation):
            ModelFile.from_dict({'dim': 0, 'grid_size': 1, 'size': 1, 'samples': [[[1, 0]]], 'schema_version': 2})
        with self.assertRaises(ContractViolation):
            ModelFile.load(os.path.join(tempfile.gettempdir(), 'nhtopo-missing-model.json'))

    def test_wrong_declared_sign(self):
        data = {'dim': 0, 'grid_size': 1, 'size': 2, 'samples': [[[0, 0], [0, -1]], [[0, 1], [0, 0]]],
                'symmetries': [
                    {'kind': 'CS', 'matrix': [[[0, 0], [0, -1]], [[0, 1], [0, 0]]],
                     'commutation_signs': {'CS,SLS': 1}},
                    {'kind': 'SLS', 'matrix': [[[1, 0], [0, 0]], [[0, 0], [-1, 0]]]},
                ]}
        model = ModelFile.from_dict(data)
        npt.assert_allclose(model.symmetries[0]['matrix'], sigma_y)
        with self.assertRaises(ContractViolation):
            model.spec()
        data['symmetries'][0]['commutation_signs'] = {'CS,SLS': -1}
        self.assertEqual(len(ModelFile.from_dict(data).spec()), 2)
