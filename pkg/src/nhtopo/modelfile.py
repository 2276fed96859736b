#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import json
import logging
import os
from dataclasses import dataclass, field

import numpy as np

from src.nhtopo.core import HamiltonianFamily
from src.nhtopo.errors import ContractViolation
from src.nhtopo.models import catalog_family
from src.nhtopo.symmetry import SymmetryOp, SymmetrySpec
from src.nhtopo.utils import ensure_dir

logger = logging.getLogger(__name__)

SCHEMA_VERSION = 1


def _encode(array: np.ndarray) -> list:
    """Complex array as nested lists of [re, im] pairs."""
    array = np.asarray(array, dtype=complex)
    return np.stack([array.real, array.imag], axis=-1).tolist()


def _decode(data, name: str) -> np.ndarray:
    array = np.asarray(data, dtype=float)
    if array.ndim < 1 or array.shape[-1] != 2:
        raise ContractViolation(f"{name} should be nested arrays of [re, im] pairs")
    return array[..., 0] + 1j * array[..., 1]


@dataclass
class ModelFile:
    """
    JSON description of a Hamiltonian family and its symmetries.

    The family is given either by its samples on the grid or by a reference to a catalog item
    {"name": ..., "params": {...}}. Every symmetry carries its kind, matrix, square sign and the
    commutation signs of the pairs it opens, keyed as "TRS,pH".
    """
    dim: int
    grid_size: int
    size: int
    samples: np.ndarray | None = None
    catalog: dict | None = None
    symmetries: list = field(default_factory=list)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self) -> None:
        if self.schema_version != SCHEMA_VERSION:
            raise ContractViolation(f"unsupported schema version {self.schema_version}")
        if (self.samples is None) == (self.catalog is None):
            raise ContractViolation("a model file holds exactly one of samples or catalog")
        if self.samples is not None:
            expected = (self.grid_size,) * self.dim + (self.size, self.size)
            if self.samples.shape != expected:
                raise ContractViolation(f"samples have shape {self.samples.shape}, expected {expected}")
        if self.catalog is not None and 'name' not in self.catalog:
            raise ContractViolation("catalog reference needs a name")

    @classmethod
    def from_dict(cls, data: dict) -> 'ModelFile':
        try:
            dim, grid_size, size = int(data['dim']), int(data['grid_size']), int(data['size'])
        except (KeyError, TypeError, ValueError) as e:
            raise ContractViolation(f"model file misses or garbles a header field: {e}")
        samples = _decode(data['samples'], 'samples') if 'samples' in data else None
        catalog = None
        if 'catalog' in data:
            catalog = {'name': str(data['catalog']['name']), 'params': dict(data['catalog'].get('params', {}))}
        symmetries = []
        for entry in data.get('symmetries', []):
            symmetries.append({
                'kind': str(entry['kind']),
                'matrix': _decode(entry['matrix'], f"{entry['kind']} matrix"),
                'square_sign': entry.get('square_sign'),
                'commutation_signs': {str(k): int(v) for k, v in entry.get('commutation_signs', {}).items()},
            })
        return cls(dim, grid_size, size, samples, catalog, symmetries, int(data.get('schema_version', SCHEMA_VERSION)))

    def to_dict(self) -> dict:
        data = {'schema_version': self.schema_version, 'dim': self.dim, 'grid_size': self.grid_size,
                'size': self.size}
        if self.samples is not None:
            data['samples'] = _encode(self.samples)
        else:
            data['catalog'] = {'name': self.catalog['name'], 'params': dict(self.catalog.get('params', {}))}
        data['symmetries'] = [{
            'kind': entry['kind'],
            'matrix': _encode(entry['matrix']),
            'square_sign': entry['square_sign'],
            'commutation_signs': dict(entry['commutation_signs']),
        } for entry in self.symmetries]
        return data

    @classmethod
    def from_family(cls, H: HamiltonianFamily, spec: SymmetrySpec | None = None) -> 'ModelFile':
        """
        Sampled model file of a family; commutation signs are stored on the first operator of each pair.
        """
        spec = spec or SymmetrySpec()
        symmetries = []
        seen = set()
        for op in spec:
            signs = {}
            for other in spec:
                key = frozenset((op.kind, other.kind))
                value = spec.commutation_signs.get(key)
                if other is op or key in seen or value is None:
                    continue
                seen.add(key)
                signs[f"{op.kind.label},{other.kind.label}"] = value
            symmetries.append({'kind': op.kind.label, 'matrix': np.array(op.matrix), 'square_sign': op.square_sign,
                               'commutation_signs': signs})
        return cls(H.dim, H.grid_size, H.size, np.array(H.samples), None, symmetries)

    @classmethod
    def load(cls, filepath: str) -> 'ModelFile':
        logger.info(f"⬇️ Reading model file from <{filepath}> path")
        try:
            with open(filepath, 'r', encoding='utf-8') as file:
                data = json.load(file)
        except (OSError, json.JSONDecodeError) as e:
            logger.error(f"🔴 Error reading model file: {e}")
            raise ContractViolation(f"cannot read model file <{filepath}>: {e}")
        return cls.from_dict(data)

    def save(self, filepath: str) -> None:
        ensure_dir(os.path.dirname(os.path.abspath(filepath)))
        with open(filepath, 'w', encoding='utf-8') as file:
            json.dump(self.to_dict(), file)
        logger.info(f"🎉 Model file written to {filepath}")

    def family(self) -> HamiltonianFamily:
        """
        :return: the sampled family, rebuilt from the catalog when the file holds a reference
        """
        if self.samples is not None:
            return HamiltonianFamily(self.samples, dim=self.dim)
        H, _ = catalog_family(self.catalog['name'], self.catalog.get('params'), self.grid_size)
        if (H.dim, H.size) != (self.dim, self.size):
            raise ContractViolation(
                f"catalog item {self.catalog['name']} has dim={H.dim}, size={H.size}; "
                f"the file declares dim={self.dim}, size={self.size}")
        return H

    def spec(self) -> SymmetrySpec:
        """
        :return: the declared symmetries, or those of the catalog item when none are declared
        """
        if not self.symmetries and self.catalog is not None:
            return catalog_family(self.catalog['name'], self.catalog.get('params'), self.grid_size)[1]
        ops = [SymmetryOp(entry['kind'], entry['matrix'], entry['square_sign']) for entry in self.symmetries]
        declared = {}
        for entry in self.symmetries:
            for pair, sign in entry['commutation_signs'].items():
                declared[tuple(pair.split(','))] = sign
        return SymmetrySpec(ops, declared)
