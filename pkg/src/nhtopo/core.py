#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import itertools
import logging
import math
import re

import numpy as np
from scipy.linalg import block_diag
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DM
from sympy.polys.matrices.normalforms import smith_normal_form

from src.nhtopo.errors import ContractViolation

logger = logging.getLogger(__name__)

# Pauli matrices, also used for the auxiliary tau space
sigma_0 = np.eye(2, dtype=complex)
sigma_x = np.array([[0, 1], [1, 0]], dtype=complex)
sigma_y = np.array([[0, -1j], [1j, 0]], dtype=complex)
sigma_z = np.array([[1, 0], [0, -1]], dtype=complex)


def as_matrix(data, name: str = 'matrix') -> np.ndarray:
    """
    Validate and convert data into a square complex matrix.

    :param data: nested sequence or array
    :param name: name used in error messages
    :return: complex ndarray of shape (N, N)
    """
    m = np.array(data, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] == 0:
        raise ContractViolation(f"{name} should be a non empty square matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise ContractViolation(f"{name} has non finite entries")
    return m


def conjugate(m: np.ndarray, phi: int, kappa: int) -> np.ndarray:
    """
    The conjugation selector M^{phi, kappa}: M, M*, M^dagger or M^T.

    :param m: matrix (or stack of matrices in the last two axes)
    :param phi: +1 keeps momentum, -1 complex conjugates
    :param kappa: +1 keeps the matrix, -1 takes the adjoint
    :return: conjugated matrix
    """
    if phi == 1 and kappa == 1:
        return m
    if phi == -1 and kappa == 1:
        return m.conj()
    if phi == 1 and kappa == -1:
        return np.swapaxes(m.conj(), -1, -2)
    if phi == -1 and kappa == -1:
        return np.swapaxes(m, -1, -2)
    raise ContractViolation(f"flags should be +1 or -1, got phi={phi}, kappa={kappa}")


class HamiltonianFamily(object):
    """
    A matrix valued function sampled on a uniform grid of the d-torus.

    Momentum on every axis takes the values k_j = 2 pi j / grid_size, so index arithmetic is
    periodic and the grid is closed under k -> -k. A zero dimensional family holds a single matrix.
    Samples are stored in an array of shape (grid_size,) * dim + (size, size) that is never mutated.
    """

    def __init__(self, samples, dim: int = 0) -> None:
        super().__init__()

        samples = np.array(samples, dtype=complex)
        if dim < 0:
            raise ContractViolation("dimension should be non negative")
        if samples.ndim != dim + 2:
            raise ContractViolation(f"samples of a {dim}D family should have {dim + 2} axes, got {samples.ndim}")
        if samples.shape[-1] != samples.shape[-2] or samples.shape[-1] == 0:
            raise ContractViolation("samples should be non empty square matrices")
        grid_shape = samples.shape[:dim]
        if dim > 0 and (len(set(grid_shape)) != 1 or grid_shape[0] < 1):
            raise ContractViolation(f"grid should have the same positive size on every axis, got {grid_shape}")
        if not np.all(np.isfinite(samples)):
            raise ContractViolation("samples have non finite entries")

        samples.flags.writeable = False
        self._samples = samples
        self.dim = dim
        self.grid_size = grid_shape[0] if dim > 0 else 1
        self.size = samples.shape[-1]

    @classmethod
    def from_matrix(cls, matrix) -> 'HamiltonianFamily':
        """
        :param matrix: a single square matrix
        :return: zero dimensional family
        """
        return cls(as_matrix(matrix), dim=0)

    @classmethod
    def from_function(cls, fn, dim: int, grid_size: int) -> 'HamiltonianFamily':
        """
        Sample a Bloch Hamiltonian on the uniform grid.

        :param fn: callable receiving the momentum vector (ndarray of length dim) and returning a matrix
        :param dim: number of momentum variables
        :param grid_size: number of samples per axis
        :return: sampled family
        """
        if dim == 0:
            return cls.from_matrix(fn(np.zeros(0)))
        ks = 2 * np.pi * np.arange(grid_size) / grid_size
        samples = [np.asarray(fn(np.array(k)), dtype=complex) for k in itertools.product(ks, repeat=dim)]
        size = samples[0].shape[-1]
        return cls(np.reshape(samples, (grid_size,) * dim + (size, size)), dim=dim)

    @property
    def samples(self) -> np.ndarray:
        return self._samples

    @property
    def matrix(self) -> np.ndarray:
        """The single matrix of a zero dimensional family."""
        if self.dim != 0:
            raise ContractViolation("only zero dimensional families hold a single matrix")
        return self._samples

    @property
    def grid_shape(self) -> tuple:
        return (self.grid_size,) * self.dim

    def flat(self) -> np.ndarray:
        """
        :return: array of shape (number of grid points, size, size) in row major grid order
        """
        return self._samples.reshape(-1, self.size, self.size)

    def indices(self):
        """
        :return: iterator over grid index tuples in row major order
        """
        return itertools.product(range(self.grid_size), repeat=self.dim)

    def points(self):
        """
        :return: iterator over (index, matrix) pairs
        """
        for index in self.indices():
            yield index, self._samples[index]

    def k_points(self) -> np.ndarray:
        """
        :return: momenta of shape grid_shape + (dim,)
        """
        ks = 2 * np.pi * np.arange(self.grid_size) / self.grid_size
        return np.stack(np.meshgrid(*([ks] * self.dim), indexing='ij'), axis=-1)

    def negated_index(self, index: tuple) -> tuple:
        return tuple((-i) % self.grid_size for i in index)

    def negated(self) -> 'HamiltonianFamily':
        """
        :return: the family k -> H(-k)
        """
        if self.dim == 0:
            return self
        flipped = self._samples
        for axis in range(self.dim):
            flipped = np.roll(np.flip(flipped, axis=axis), 1, axis=axis)
        return HamiltonianFamily(flipped, dim=self.dim)

    def map(self, fn) -> 'HamiltonianFamily':
        """
        Apply a matrix function at every grid point.

        :param fn: callable matrix -> matrix, the output size may differ from the input size
        :return: new family on the same grid
        """
        out = [np.asarray(fn(m), dtype=complex) for m in self.flat()]
        size = out[0].shape[-1]
        return HamiltonianFamily(np.reshape(out, self.grid_shape + (size, size)), dim=self.dim)

    def direct_sum(self, other: 'HamiltonianFamily') -> 'HamiltonianFamily':
        """
        :param other: family on the same grid
        :return: the block diagonal family H (+) H'
        """
        self._check_compatible(other)
        out = [block_diag(a, b) for a, b in zip(self.flat(), other.flat())]
        size = self.size + other.size
        return HamiltonianFamily(np.reshape(out, self.grid_shape + (size, size)), dim=self.dim)

    def hermitian_residual(self) -> float:
        return float(np.max(np.abs(self._samples - conjugate(self._samples, 1, -1))))

    def is_hermitian(self, tol: float) -> bool:
        return self.hermitian_residual() < tol

    def _check_compatible(self, other: 'HamiltonianFamily') -> None:
        if self.dim != other.dim or self.grid_size != other.grid_size:
            raise ContractViolation("families should share dimension and grid size")

    def __add__(self, other: 'HamiltonianFamily') -> 'HamiltonianFamily':
        self._check_compatible(other)
        if self.size != other.size:
            raise ContractViolation("families should share the matrix size")
        return HamiltonianFamily(self._samples + other.samples, dim=self.dim)

    def __sub__(self, other: 'HamiltonianFamily') -> 'HamiltonianFamily':
        return self + (-1) * other

    def __mul__(self, scalar) -> 'HamiltonianFamily':
        return HamiltonianFamily(scalar * self._samples, dim=self.dim)

    __rmul__ = __mul__

    def __neg__(self) -> 'HamiltonianFamily':
        return (-1) * self

    def __repr__(self) -> str:
        return f"HamiltonianFamily(dim={self.dim}, grid_size={self.grid_size}, size={self.size})"


class AbelianGroup(object):
    """
    A finitely generated abelian group stored as a list of cyclic factors.

    Every factor is a pair (modulus, scale): modulus 0 is an infinite cyclic group, a positive
    modulus m is Z_m. Scale 2 labels a copy of Z whose invariant takes even values ("2Z").
    """
    _token_pattern = re.compile(r'^(2?)Z(\d*)$')

    def __init__(self, factors=()) -> None:
        super().__init__()
        factors = tuple((int(m), int(s)) for m, s in factors)
        for modulus, scale in factors:
            if modulus < 0 or modulus == 1:
                raise ContractViolation(f"factor modulus should be 0 or at least 2, got {modulus}")
            if scale not in (1, 2):
                raise ContractViolation(f"factor scale should be 1 or 2, got {scale}")
            if scale == 2 and modulus != 0:
                raise ContractViolation("scale 2 is only allowed on free factors")
        self.factors = factors

    @classmethod
    def parse(cls, token: str) -> 'AbelianGroup':
        """
        Parse a group string such as "0", "Z", "2Z+2Z", "Z2⊕Z2".

        :param token: group string
        :return: AbelianGroup
        """
        token = token.strip()
        if token in ('', '0'):
            return cls()
        factors = []
        for part in re.split(r'[+⊕]', token):
            match = cls._token_pattern.match(part.strip())
            if match is None:
                raise ContractViolation(f"unknown group factor <{part}> in <{token}>")
            scale = 2 if match.group(1) else 1
            modulus = int(match.group(2)) if match.group(2) else 0
            if scale == 2 and modulus:
                raise ContractViolation(f"unknown group factor <{part}> in <{token}>")
            factors.append((modulus, scale))
        return cls(factors)

    @property
    def free_rank(self) -> int:
        return sum(1 for m, _ in self.factors if m == 0)

    @property
    def torsion(self) -> tuple:
        return tuple(m for m, _ in self.factors if m > 0)

    @property
    def moduli(self) -> tuple:
        return tuple(m for m, _ in self.factors)

    def is_trivial(self) -> bool:
        return len(self.factors) == 0

    def canonical(self) -> 'AbelianGroup':
        """
        :return: same group with free factors first (2Z before Z), then torsion by increasing modulus
        """
        free = sorted((f for f in self.factors if f[0] == 0), key=lambda f: -f[1])
        torsion = sorted(f for f in self.factors if f[0] > 0)
        return AbelianGroup(free + torsion)

    def unscaled(self) -> 'AbelianGroup':
        return AbelianGroup((m, 1) for m, _ in self.factors)

    @staticmethod
    def _factor_name(factor) -> str:
        modulus, scale = factor
        if modulus == 0:
            return '2Z' if scale == 2 else 'Z'
        return f'Z{modulus}'

    def token(self) -> str:
        """
        :return: ascii form used in the oracle tables, e.g. "Z+Z"
        """
        if not self.factors:
            return '0'
        return '+'.join(self._factor_name(f) for f in self.factors)

    def __str__(self) -> str:
        if not self.factors:
            return '0'
        return '⊕'.join(self._factor_name(f) for f in self.factors)

    def __repr__(self) -> str:
        return f"AbelianGroup({self.token()})"

    def __eq__(self, other) -> bool:
        return isinstance(other, AbelianGroup) and self.factors == other.factors

    def __hash__(self) -> int:
        return hash(self.factors)

    def __len__(self) -> int:
        return len(self.factors)

    def __iter__(self):
        return iter(self.factors)


ZERO = AbelianGroup()
Z = AbelianGroup([(0, 1)])
TWO_Z = AbelianGroup([(0, 2)])
Z2 = AbelianGroup([(2, 1)])


def direct_sum(a: AbelianGroup, b: AbelianGroup) -> AbelianGroup:
    """
    :return: a (+) b with a's factors first
    """
    return AbelianGroup(a.factors + b.factors)


class GroupHom(object):
    """
    A homomorphism between finitely generated abelian groups.

    ``matrix[i][j]`` is the coefficient of the i-th codomain generator in the image of the j-th
    domain generator. Entries on torsion rows are reduced modulo the row's order.
    """

    def __init__(self, domain: AbelianGroup, codomain: AbelianGroup, matrix=None) -> None:
        super().__init__()
        shape = (len(codomain), len(domain))
        if matrix is None:
            matrix = np.zeros(shape, dtype=int)
        matrix = np.array(matrix, dtype=int).reshape(shape) if 0 in shape else np.array(matrix, dtype=int)
        if matrix.shape != shape:
            raise ContractViolation(f"homomorphism matrix should have shape {shape}, got {matrix.shape}")

        for i, n in enumerate(codomain.moduli):
            if n > 0:
                matrix[i] = matrix[i] % n
        for j, m in enumerate(domain.moduli):
            if m == 0:
                continue
            for i, n in enumerate(codomain.moduli):
                if (n == 0 and matrix[i, j] != 0) or (n > 0 and (m * matrix[i, j]) % n != 0):
                    raise ContractViolation(
                        f"map {domain.token()} -> {codomain.token()} is not well defined: generator {j} of "
                        f"order {m} is sent to an element of order not dividing {m}")

        matrix.flags.writeable = False
        self.domain = domain
        self.codomain = codomain
        self.matrix = matrix

    @classmethod
    def zero(cls, domain: AbelianGroup, codomain: AbelianGroup) -> 'GroupHom':
        return cls(domain, codomain)

    def is_zero(self) -> bool:
        return not np.any(self.matrix)

    def columns(self) -> list:
        return [self.matrix[:, j] for j in range(self.matrix.shape[1])]

    def token(self) -> str:
        """
        :return: the map string of the oracle tables, e.g. "n->(n,-n)"
        """
        if self.is_zero():
            return '0'
        rows, cols = self.matrix.shape
        if rows == 1 and cols == 1:
            a = int(self.matrix[0, 0])
            return 'n->n' if abs(a) == 1 else f'n->{abs(a)}n'
        if rows == 2 and cols == 1:
            a, b = (int(x) for x in self.matrix[:, 0])
            if a == b and abs(a) == 1:
                return 'n->(n,n)'
            if a == -b and abs(a) == 1:
                return 'n->(n,-n)'
        if rows == 1 and cols == 2:
            a, b = (int(x) for x in self.matrix[0])
            if abs(a) == 1 and abs(b) == 1:
                return '(n,m)->n+m' if a == b else '(n,m)->n-m'
        return 'matrix:' + str(self.matrix.tolist()).replace(' ', '')

    def __eq__(self, other) -> bool:
        return (isinstance(other, GroupHom) and self.domain == other.domain and self.codomain == other.codomain
                and np.array_equal(self.matrix, other.matrix))

    def __hash__(self) -> int:
        return hash((self.domain, self.codomain, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"GroupHom({self.domain.token()} -> {self.codomain.token()}, {self.token()})"


def hom_is_unique(a: AbelianGroup, b: AbelianGroup) -> bool:
    """
    Whether Hom(a, b) is trivial, i.e. the zero map is the only homomorphism.

    :param a: domain
    :param b: codomain
    :return: True if no non zero homomorphism exists
    """
    for m in a.moduli:
        for n in b.moduli:
            if m == 0:
                return False
            if n > 0 and math.gcd(m, n) > 1:
                return False
    return True


def _invariant_factors(relations: list, rows: int) -> list:
    """
    Nonzero diagonal entries of the Smith normal form of an integer matrix.

    :param relations: list of columns, each of length rows
    :param rows: number of rows
    :return: absolute values of the nonzero invariant factors
    """
    columns = len(relations)
    matrix = [[int(relations[j][i]) for j in range(columns)] for i in range(rows)]
    snf = smith_normal_form(DM(matrix, ZZ)).to_Matrix()
    diagonal = [abs(int(snf[i, i])) for i in range(min(rows, columns))]
    return [d for d in diagonal if d != 0]


def quotient_by_images(target: AbelianGroup, images: list) -> AbelianGroup:
    """
    Isomorphism class of target / (sum of the images), via the Smith normal form of the stacked
    relation matrix (torsion relations of target plus every image column).

    Scale labels of target survive only if every image is zero.

    :param target: group to quotient
    :param images: homomorphisms into target
    :return: canonical AbelianGroup
    """
    for hom in images:
        if hom.codomain != target:
            raise ContractViolation(f"image codomain {hom.codomain.token()} differs from target {target.token()}")

    image_columns = [c for hom in images for c in hom.columns() if np.any(c)]
    if not image_columns:
        return target.canonical()

    rows = len(target)
    relations = []
    for i, n in enumerate(target.moduli):
        if n > 0:
            column = np.zeros(rows, dtype=int)
            column[i] = n
            relations.append(column)
    relations.extend(image_columns)

    diagonal = _invariant_factors(relations, rows)
    factors = [(0, 1)] * (rows - len(diagonal)) + [(d, 1) for d in diagonal if d > 1]
    if any(scale == 2 for _, scale in target):
        logger.warning(f"⚠️ scale label of {target.token()} dropped by a non zero image")
    return AbelianGroup(factors).canonical()
