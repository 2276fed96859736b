#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import functools
import itertools
import logging
from dataclasses import dataclass, field
from typing import Callable, NamedTuple

import numpy as np
from scipy.linalg import null_space

from src.nhtopo.core import HamiltonianFamily, conjugate, sigma_0, sigma_x, sigma_y, sigma_z
from src.nhtopo.errors import ContractViolation, NHTopoError, UnknownId, Unquantized
from src.nhtopo.gaps import gap_report, line_gap_deform
from src.nhtopo.invariants import (InvariantValue, chern_2d, pfaffian_value, sign_det, sign_pf, signature_0d,
                                   winding_1d, z2_pair)
from src.nhtopo.ktable import BLOCKS, BlockSpec, block_by_index
from src.nhtopo.symmetry import (SymmetryClassId, SymmetryKind, SymmetryOp, SymmetrySpec, commutation_sign,
                                 detect_class, extra_signs, find_class, verify_symmetry)
from src.nhtopo.utils import DEFAULT_STEPS, GAP_TOL, UNITARY_TOL

logger = logging.getLogger(__name__)

K = SymmetryKind
_one = np.eye(1, dtype=complex)
_paulis = (sigma_0, sigma_z, sigma_x, sigma_y)


def _kron(*matrices) -> np.ndarray:
    return functools.reduce(np.kron, matrices)


def _pauli_strings(size: int) -> list:
    if size == 1:
        return [_one]
    n = int(np.log2(size))
    return [_kron(*factors) for factors in itertools.product(_paulis, repeat=n)]


########################################################################################################################
# class representatives
########################################################################################################################

# generator matrices of the ten AZ classes; AZ dagger classes reuse them with dagger kinds
_AZ_GENERATORS = {
    'A': {},
    'AIII': {K.CS: sigma_z},
    'AI': {K.TRS: sigma_0},
    'BDI': {K.TRS: sigma_0, K.PHS: sigma_x},
    'D': {K.PHS: sigma_0},
    'DIII': {K.TRS: 1j * sigma_y, K.PHS: 1j * sigma_x},
    'AII': {K.TRS: 1j * sigma_y},
    'CII': {K.TRS: _kron(1j * sigma_y, sigma_0), K.PHS: _kron(1j * sigma_y, sigma_z)},
    'C': {K.PHS: 1j * sigma_y},
    'CI': {K.TRS: sigma_0, K.PHS: 1j * sigma_y},
}
_DAGGER = {K.TRS: K.TRS_DAG, K.PHS: K.PHS_DAG}


def _base_generators(c: SymmetryClassId) -> tuple:
    base = c.name.split('+', 1)[0]
    dagger = base.endswith('^\\dag')
    base = base.replace('^\\dag', '')
    generators = _AZ_GENERATORS[base]
    if dagger:
        generators = {_DAGGER[kind]: matrix for kind, matrix in generators.items()}
    size = next(iter(generators.values())).shape[0] if generators else 1
    return generators, size


def class_representative(c, prefer: str = 'S') -> SymmetrySpec:
    """
    A symmetry presentation whose detected class is c.

    AZ and AZ dagger classes use fixed generator matrices. For AZ+U classes the AZ generators are
    doubled with an auxiliary identity and the extra SLS or pH operator is searched among Pauli
    strings P (x) rho until its commutation signs match the class label.

    :param c: SymmetryClassId or class name
    :param prefer: 'S' or 'eta', which extra operator to use when the label carries both
    :return: SymmetrySpec
    """
    if prefer not in ('S', 'eta'):
        raise ContractViolation(f"prefer should be 'S' or 'eta', got <{prefer}>")
    c = find_class(c)
    generators, size = _base_generators(c)
    if c.t is None:
        return SymmetrySpec(SymmetryOp(kind, matrix) for kind, matrix in generators.items())

    signs = extra_signs(c)
    kind = prefer if prefer in signs else next(iter(signs))
    target = signs[kind]
    anchors = [SymmetryOp(k, np.kron(m, sigma_0)) for k, m in generators.items()]
    anchors.sort(key=lambda op: [K.TRS, K.PHS, K.CS].index(op.kind))

    for rho in _paulis:
        for p in _pauli_strings(size):
            if rho is sigma_0 and np.allclose(p, np.eye(size)):
                continue
            extra = SymmetryOp(K.SLS if kind == 'S' else K.PH, np.kron(p, rho))
            found = ''.join('+' if commutation_sign(a, extra) == 1 else '-' for a in anchors)
            if found == target and all(commutation_sign(a, extra) is not None for a in anchors):
                return SymmetrySpec(anchors + [extra])
    raise ContractViolation(f"no Pauli string presentation found for {c.name}")


def scalar_solution_dimension(spec: SymmetrySpec) -> int:
    """
    Real dimension of the space of 1x1 Hamiltonians h satisfying every symmetry of spec.

    :param spec: presentation with 1x1 matrices
    :return: 0, 1 or 2
    """
    if spec.size not in (None, 1):
        raise ContractViolation("scalar solution space needs 1x1 operators")
    rows = []
    for op in spec:
        columns = []
        for basis in (_one, 1j * _one):
            image = op.matrix @ conjugate(basis, op.phi, op.kappa) @ op.matrix.conj().T - op.c * basis
            columns.append([image[0, 0].real, image[0, 0].imag])
        rows.append(np.array(columns).T)
    if not rows:
        return 2
    return int(null_space(np.vstack(rows)).shape[1])


def scalar_point_gap_dimension(t_phase: float, c_phase: float) -> int:
    """
    Solution dimension of the 1x1 class BDI presentation T = e^{i t_phase}, C = e^{i c_phase}.
    Zero means the only symmetric 1x1 Hamiltonian is h = 0, which has no point gap.
    """
    spec = SymmetrySpec([SymmetryOp(K.TRS, np.exp(1j * t_phase) * _one),
                         SymmetryOp(K.PHS, np.exp(1j * c_phase) * _one)])
    return scalar_solution_dimension(spec)


########################################################################################################################
# building block generators
########################################################################################################################

class GeneratorModel(NamedTuple):
    """A pair of 0D Hamiltonians (H0, H1) with named symmetry operators."""
    label: str
    ops: dict
    hamiltonians: tuple

    @property
    def spec(self) -> SymmetrySpec:
        return SymmetrySpec(self.ops.values())

    @property
    def matrices(self) -> dict:
        return {name: op.matrix for name, op in self.ops.items()}

    def reduced(self, h: np.ndarray) -> np.ndarray:
        """The Hermitian matrix eta H for pseudo Hermitian generators, H otherwise."""
        return self.ops['eta'].matrix @ h if 'eta' in self.ops else h


@dataclass(frozen=True)
class BlockHarness:
    """
    How a building block is measured: Hermitian generators of the line gap group, point gap
    generators (one per codomain factor) and a reader returning one reading per codomain factor.
    ``effective`` rewrites the operators of a Hermitian generator into those acting on eta H.
    """
    index: int
    class_name: str
    hermitian: tuple
    point: tuple
    reader: Callable
    effective: Callable | None = None


def _ops(**named) -> dict:
    return {name: SymmetryOp(kind, matrix) for name, (kind, matrix) in named.items()}


def _pair(h) -> tuple:
    h = np.asarray(h, dtype=complex)
    return h, -h


def _count(a: np.ndarray, u: np.ndarray | None = None, value: complex = 1.) -> tuple:
    if u is not None:
        basis = null_space(u - value * np.eye(u.shape[0]))
        a = basis.conj().T @ a @ basis
    return 'count', signature_0d(a).value


def _pfaffian(a: np.ndarray, c: np.ndarray, phase: complex, u: np.ndarray | None = None,
              value: complex = 1.) -> tuple:
    if u is not None:
        basis = null_space(u - value * np.eye(u.shape[0]))
        a = basis.conj().T @ a @ basis
        c = basis.conj().T @ c @ basis.conj()
    return 'sign', pfaffian_value(phase * a @ c)


def _sign(value: InvariantValue) -> tuple:
    return 'sign', complex(value.value)


def _eta_c(n: dict) -> dict:
    return dict(n, C=n['eta'] @ n['C'])


def _eta_ct(n: dict) -> dict:
    return dict(n, U=n['eta'] @ n['C'] @ n['T'].conj().T)


@functools.lru_cache(maxsize=None)
def block_harnesses() -> dict:
    """
    :return: dict from block index (1..18) to BlockHarness
    """
    sx, sy, sz, s0 = sigma_x, sigma_y, sigma_z, sigma_0
    flip = np.array([[0, -1], [1, 0]], dtype=complex)
    harnesses = [
        BlockHarness(
            1, 'A+\\eta',
            (GeneratorModel('eta=+1', _ops(eta=(K.PH, _one)), _pair(_one)),
             GeneratorModel('eta=-1', _ops(eta=(K.PH, -_one)), _pair(_one))),
            (GeneratorModel('scalar', _ops(herm=(K.PH, _one)), _pair(_one)),),
            lambda a, n: [_count(a)]),
        BlockHarness(
            2, 'AI',
            (GeneratorModel('T=1', _ops(T=(K.TRS, _one)), _pair(_one)),),
            (GeneratorModel('T=1', _ops(T=(K.TRS, _one)), _pair(_one)),),
            lambda a, n: [_sign(sign_det(a))]),
        BlockHarness(
            3, 'D^\\dag',
            (GeneratorModel('C=1', _ops(C=(K.PHS_DAG, s0)), _pair(sy)),),
            (GeneratorModel('C=1', _ops(C=(K.PHS_DAG, _one)), _pair(1j * _one)),),
            lambda a, n: [_sign(sign_det(a, -1j))]),
        BlockHarness(
            4, 'BDI',
            (GeneratorModel('T=1,C=sx', _ops(T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz)),),
            (GeneratorModel('T=1,C=sx', _ops(T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz)),),
            lambda a, n: [_sign(sign_pf(a @ n['C']))]),
        BlockHarness(
            5, 'D+\\eta_+',
            (GeneratorModel('eta=+1', _ops(eta=(K.PH, s0), C=(K.PHS, s0)), _pair(sy)),
             GeneratorModel('eta=-1', _ops(eta=(K.PH, -s0), C=(K.PHS, s0)), _pair(sy))),
            (GeneratorModel('C=1', _ops(herm=(K.PH, s0), C=(K.PHS, s0)), _pair(sy)),),
            lambda a, n: [_pfaffian(a, n['C'], 1j)],
            _eta_c),
        BlockHarness(
            6, 'D+\\eta_-',
            (GeneratorModel('eta=sy', _ops(eta=(K.PH, sy), C=(K.PHS, s0)), _pair(sy)),),
            (GeneratorModel('T=sy', _ops(herm=(K.PH, s0), T=(K.TRS, sy)), _pair(s0)),),
            lambda a, n: [_count(a)]),
        BlockHarness(
            7, 'C+\\eta_-',
            (GeneratorModel('eta=sy', _ops(eta=(K.PH, sy), C=(K.PHS, sy)), _pair(sy)),),
            (GeneratorModel('T=1', _ops(herm=(K.PH, _one), T=(K.TRS, _one)), _pair(_one)),),
            lambda a, n: [_count(a)]),
        BlockHarness(
            8, 'AI+\\eta_+',
            (GeneratorModel('eta=+1', _ops(eta=(K.PH, _one), T=(K.TRS, _one)), _pair(_one)),
             GeneratorModel('eta=-1', _ops(eta=(K.PH, -_one), T=(K.TRS, _one)), _pair(_one))),
            (GeneratorModel('T=1', _ops(herm=(K.PH, _one), T=(K.TRS, _one)), _pair(_one)),),
            lambda a, n: [_count(a)]),
        BlockHarness(
            9, 'AI+\\eta_-',
            (GeneratorModel('eta=sy', _ops(eta=(K.PH, sy), T=(K.TRS, s0)), _pair(s0)),),
            (GeneratorModel('C=1', _ops(herm=(K.PH, s0), C=(K.PHS, s0)), _pair(sy)),),
            lambda a, n: [_pfaffian(a, n['C'], 1j)],
            lambda n: dict(n, C=n['T'])),
        BlockHarness(
            10, 'AII+\\eta_+',
            (GeneratorModel('eta=+1', _ops(eta=(K.PH, s0), T=(K.TRS, sy)), _pair(s0)),
             GeneratorModel('eta=-1', _ops(eta=(K.PH, -s0), T=(K.TRS, sy)), _pair(s0))),
            (GeneratorModel('T=sy', _ops(herm=(K.PH, s0), T=(K.TRS, sy)), _pair(s0)),),
            lambda a, n: [_count(a)]),
        BlockHarness(
            11, 'AIII+S_-,\\eta_-',
            (GeneratorModel('eta=sz', _ops(eta=(K.PH, sz), Gamma=(K.CS, sx)), _pair(sz)),),
            (GeneratorModel('U=+i', _ops(herm=(K.PH, _one), U=(K.UNI, 1j * _one)), _pair(_one)),
             GeneratorModel('U=-i', _ops(herm=(K.PH, _one), U=(K.UNI, -1j * _one)), _pair(_one))),
            lambda a, n: [_count(a, n['U'], 1j), _count(a, n['U'], -1j)],
            lambda n: dict(n, U=n['eta'] @ n['Gamma'])),
        BlockHarness(
            12, 'AI+S_+',
            (GeneratorModel('S=sz', _ops(T=(K.TRS, s0), S=(K.SLS, sz)), _pair(sx)),),
            (GeneratorModel('flip h1', _ops(T=(K.TRS, s0), S=(K.SLS, sz)), (sx, flip)),
             GeneratorModel('flip h2', _ops(T=(K.TRS, s0), S=(K.SLS, sz)), (sx, -flip))),
            lambda a, n: [('sign', complex(v)) for v in z2_pair(a, n['S']).value]),
        BlockHarness(
            13, 'BDI+S_{++},\\eta_{++}',
            (GeneratorModel('eta=+1', _ops(eta=(K.PH, s0), T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz)),
             GeneratorModel('eta=-1', _ops(eta=(K.PH, -s0), T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz))),
            (GeneratorModel('T=1,C=sx', _ops(herm=(K.PH, s0), T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz)),),
            lambda a, n: [_sign(sign_pf(a @ n['C']))],
            _eta_c),
        BlockHarness(
            14, 'BDI+S_{-+},\\eta_{+-}',
            (GeneratorModel('eta=sz', _ops(eta=(K.PH, sz), T=(K.TRS, s0), C=(K.PHS, sx)), _pair(sz)),),
            (GeneratorModel('U=i sy', _ops(herm=(K.PH, s0), T=(K.TRS, s0), U=(K.UNI, 1j * sy)), _pair(s0)),),
            lambda a, n: [_count(a, n['U'], 1j)],
            _eta_ct),
        BlockHarness(
            15, 'BDI+S_{+-},\\eta_{-+}',
            (GeneratorModel('eta=sz',
                            _ops(eta=(K.PH, _kron(sz, s0)), T=(K.TRS, _kron(sx, s0)), C=(K.PHS, _kron(s0, s0))),
                            _pair(_kron(sz, sy))),),
            (GeneratorModel('U=+i', _ops(herm=(K.PH, s0), C=(K.PHS, s0), U=(K.UNI, 1j * s0)), _pair(sy)),
             GeneratorModel('U=-i', _ops(herm=(K.PH, s0), C=(K.PHS, s0), U=(K.UNI, -1j * s0)), _pair(sy))),
            lambda a, n: [_pfaffian(a, n['C'], 1j, n['U'], 1j), _pfaffian(a, n['C'], 1j, n['U'], -1j)],
            lambda n: dict(_eta_ct(n), C=n['T'])),
        BlockHarness(
            16, 'DIII+S_{+-},\\eta_{+-}',
            (GeneratorModel('eta=tz',
                            _ops(eta=(K.PH, _kron(s0, sz)), T=(K.TRS, _kron(1j * sy, s0)), C=(K.PHS, _kron(s0, sx))),
                            _pair(_kron(s0, sz))),),
            (GeneratorModel('U=+1', _ops(herm=(K.PH, s0), T=(K.TRS, sy), U=(K.UNI, s0)), _pair(s0)),
             GeneratorModel('U=-1', _ops(herm=(K.PH, s0), T=(K.TRS, sy), U=(K.UNI, -s0)), _pair(s0))),
            lambda a, n: [_count(a, n['U'], 1), _count(a, n['U'], -1)],
            _eta_ct),
        BlockHarness(
            17, 'CII+S_{-+},\\eta_{+-}',
            (GeneratorModel('eta=tz',
                            _ops(eta=(K.PH, _kron(s0, sz)), T=(K.TRS, _kron(1j * sy, s0)),
                                 C=(K.PHS, _kron(s0, 1j * sy))),
                            _pair(_kron(s0, sz))),),
            (GeneratorModel('U=i sy', _ops(herm=(K.PH, s0), T=(K.TRS, 1j * sy), U=(K.UNI, 1j * sy)), _pair(s0)),),
            lambda a, n: [_count(a, n['U'], 1j)],
            _eta_ct),
        BlockHarness(
            18, 'CI+S_{+-},\\eta_{+-}',
            (GeneratorModel('eta=sz', _ops(eta=(K.PH, sz), T=(K.TRS, s0), C=(K.PHS, 1j * sy)), _pair(sz)),),
            (GeneratorModel('U=+1', _ops(herm=(K.PH, _one), T=(K.TRS, _one), U=(K.UNI, _one)), _pair(_one)),
             GeneratorModel('U=-1', _ops(herm=(K.PH, _one), T=(K.TRS, _one), U=(K.UNI, -_one)), _pair(_one))),
            lambda a, n: [_count(a, n['U'], 1), _count(a, n['U'], -1)],
            _eta_ct),
    ]
    return {harness.index: harness for harness in harnesses}


class Check(NamedTuple):
    name: str
    passed: bool
    detail: str = ''


@dataclass
class BlockReport:
    """Outcome of the verification of one building block."""
    index: int
    class_name: str
    title: str
    expected: list
    measured: list = field(default_factory=list)
    checks: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def failures(self) -> list:
        return [check for check in self.checks if not check.passed]

    def add(self, name: str, passed: bool, detail: str = '') -> None:
        self.checks.append(Check(name, bool(passed), detail))

    def to_dict(self) -> dict:
        return {
            'index': self.index,
            'class': self.class_name,
            'title': self.title,
            'expected': self.expected,
            'measured': self.measured,
            'passed': self.passed,
            'checks': [check._asdict() for check in self.checks],
        }


def _difference(first: tuple, second: tuple) -> int:
    """Invariant difference between the readings of H1 and H0: integer for counts, 0/1 for signs."""
    kind, a = first
    _, b = second
    if kind == 'count':
        return b - a
    if abs(a) <= GAP_TOL:
        raise Unquantized("reference reading vanishes")
    ratio = complex(b) / complex(a)
    if abs(ratio.imag) > 1e-6 * abs(ratio):
        raise Unquantized(f"relative reading {ratio:.3f} is not real")
    return 0 if ratio.real > 0 else 1


def _model_differences(model: GeneratorModel, reader: Callable, effective: Callable | None) -> list:
    named = model.matrices
    if effective is not None:
        named = effective(named)
    readings = [reader(model.reduced(h), named) for h in model.hamiltonians]
    return [_difference(a, b) for a, b in zip(*readings)]


def _check_model(report: BlockReport, model: GeneratorModel, role: str, tol: float) -> None:
    for j, h in enumerate(model.hamiltonians):
        family = HamiltonianFamily.from_matrix(h)
        for name, op in model.ops.items():
            residual = verify_symmetry(family, op)
            report.add(f"{role} {model.label} H{j} {name}", residual < tol, f"residual {residual:.1e}")
        gaps = gap_report(family)
        if role == 'hermitian':
            report.add(f"{role} {model.label} H{j} hermitian", family.is_hermitian(tol),
                       f"residual {family.hermitian_residual():.1e}")
            report.add(f"{role} {model.label} H{j} real line gap", gaps.real_line_gapped,
                       f"margin {gaps.real_line_margin:.2e}")
        else:
            report.add(f"{role} {model.label} H{j} point gap", gaps.point_gapped,
                       f"margin {gaps.point_gap_margin:.2e}")


def verify_block(block_id, tol: float = UNITARY_TOL) -> BlockReport:
    """
    Rebuild the generators of a building block and check that the forgetting map they realize is
    the tabulated one.

    Checks cover symmetry residuals of every generator, the detected class of the Hermitian
    generators, Hermiticity and real line gap of the Hermitian generators, point gap of the point
    generators and finally the measured image matrix against the block homomorphism (entries up to
    sign, torsion rows modulo their order).

    :param block_id: block index, block class name or catalog id of a block
    :param tol: symmetry residual threshold
    :return: BlockReport
    """
    entry = catalog_get(block_id)
    if entry.harness is None:
        raise UnknownId(f"<{block_id}> is not a building block")
    harness = entry.harness
    block = block_by_index(harness.index)
    report = BlockReport(block.index, block.class_id.name, block.title, block.hom.matrix.tolist())

    for model in harness.hermitian:
        _check_model(report, model, 'hermitian', tol)
        try:
            detected = detect_class(model.spec)
            report.add(f"hermitian {model.label} class", detected == block.class_id, f"detected {detected.name}")
        except NHTopoError as e:
            report.add(f"hermitian {model.label} class", False, str(e))
    for model in harness.point:
        _check_model(report, model, 'point', tol)
    if block.class_id.name == 'BDI':
        phases = 2 * np.pi * np.arange(12) / 12
        dimension = max(scalar_point_gap_dimension(a, b) for a, b in itertools.product(phases, repeat=2))
        report.add("no 1x1 point gapped model", dimension == 0, f"largest 1x1 solution dimension {dimension}")

    codomain = block.codomain.moduli
    shape_ok = len(harness.hermitian) == len(block.domain) and len(harness.point) == len(codomain)
    report.add("generator count", shape_ok,
               f"{len(harness.hermitian)} hermitian / {len(harness.point)} point generators")
    if not shape_ok:
        return report

    try:
        units = []
        for i, model in enumerate(harness.point):
            deltas = _model_differences(model, harness.reader, None)
            others = [d for j, d in enumerate(deltas) if j != i and d != 0]
            report.add(f"point {model.label} unit", deltas[i] != 0 and not others, f"differences {deltas}")
            units.append(deltas[i] or 1)

        columns = [_model_differences(model, harness.reader, harness.effective) for model in harness.hermitian]
        measured = []
        for i, unit in enumerate(units):
            row = []
            for column in columns:
                if column[i] % unit:
                    raise Unquantized(f"image {column[i]} is not a multiple of the unit {unit}")
                row.append(column[i] // unit)
            measured.append(row)
    except NHTopoError as e:
        report.add("image", False, f"{e.code}: {e}")
        return report

    report.measured = measured
    expected = np.abs(block.hom.matrix)
    found = np.abs(np.array(measured, dtype=int))
    for i, n in enumerate(codomain):
        if n > 0:
            expected[i] %= n
            found[i] %= n
    report.add("image", np.array_equal(found, expected), f"measured {measured}, expected {report.expected}")
    logger.info(f"📊 {block.title}: {'verified' if report.passed else 'FAILED'}")
    return report


########################################################################################################################
# exemplars
########################################################################################################################

def _qwz(k: np.ndarray, mass: float) -> np.ndarray:
    kx, ky = k
    return np.sin(kx) * sigma_x + np.sin(ky) * sigma_y + (mass - np.cos(kx) - np.cos(ky)) * sigma_z


def _off_diagonal(h1: np.ndarray, h2: np.ndarray) -> np.ndarray:
    n = h1.shape[0]
    out = np.zeros((2 * n, 2 * n), dtype=complex)
    out[:n, n:] = h1
    out[n:, :n] = h2
    return out


class Exemplar(NamedTuple):
    """A Bloch Hamiltonian with default parameters, its symmetries and its quantized invariant."""
    name: str
    title: str
    dim: int
    grid_size: int
    defaults: dict
    function: Callable
    symmetry: Callable
    invariant: str


EXEMPLARS = {
    'hatano': Exemplar(
        'hatano', 'Hatano-Nelson chain h(k) = t_R e^{ik} + t_L e^{-ik}', 1, 16,
        {'t_right': 1., 't_left': 0.},
        lambda p: lambda k: np.array([[p['t_right'] * np.exp(1j * k[0]) + p['t_left'] * np.exp(-1j * k[0])]]),
        lambda p: SymmetrySpec(),
        'det_winding'),
    'qwz-chern': Exemplar(
        'qwz-chern', 'two band Chern insulator d(k) = (sin kx, sin ky, m - cos kx - cos ky)', 2, 24,
        {'mass': 1.},
        lambda p: lambda k: _qwz(k, p['mass']),
        lambda p: SymmetrySpec(),
        'chern'),
    'a+s-wire': Exemplar(
        'a+s-wire', 'class A+S chain with blocks h1 = e^{ik}, h2 = r e^{-ik}', 1, 16,
        {'ratio': .5},
        lambda p: lambda k: _off_diagonal(np.array([[np.exp(1j * k[0])]]), np.array([[p['ratio'] * np.exp(-1j * k[0])]])),
        lambda p: SymmetrySpec([SymmetryOp(K.SLS, sigma_z)]),
        'winding'),
    'aiii+s-chern': Exemplar(
        'aiii+s-chern', 'class AIII+S_- layer with Hermitian blocks h1 = QWZ, h2 = r QWZ', 2, 16,
        {'ratio': .5, 'mass': 1.},
        lambda p: lambda k: _off_diagonal(_qwz(k, p['mass']), p['ratio'] * _qwz(k, p['mass'])),
        lambda p: SymmetrySpec([SymmetryOp(K.CS, _kron(sigma_y, sigma_0)), SymmetryOp(K.SLS, _kron(sigma_z, sigma_0))]),
        'chern'),
}


def _params(exemplar: Exemplar, params: dict | None) -> dict:
    params = dict(exemplar.defaults, **(params or {}))
    unknown = set(params) - set(exemplar.defaults)
    if unknown:
        raise ContractViolation(f"unknown parameters {sorted(unknown)} for exemplar {exemplar.name}")
    return {key: float(value) for key, value in params.items()}


def exemplar_family(name: str, params: dict | None = None, grid_size: int | None = None) -> tuple:
    """
    Sample an exemplar.

    :param name: exemplar name
    :param params: overrides of the default parameters
    :param grid_size: samples per axis, the exemplar default if None
    :return: (HamiltonianFamily, SymmetrySpec)
    """
    if name not in EXEMPLARS:
        raise UnknownId(f"unknown exemplar <{name}>, available: {sorted(EXEMPLARS)}")
    exemplar = EXEMPLARS[name]
    p = _params(exemplar, params)
    family = HamiltonianFamily.from_function(exemplar.function(p), exemplar.dim, grid_size or exemplar.grid_size)
    return family, exemplar.symmetry(p)


class RelationReport(NamedTuple):
    """Invariants of the two sublattice blocks after a line gap deformation."""
    name: str
    axis: str
    first: InvariantValue
    second: InvariantValue

    @property
    def relation(self) -> int:
        """+1 when the blocks carry equal invariants, -1 when opposite, 0 otherwise."""
        a, b = self.first.value, self.second.value
        if a == b:
            return 1
        return -1 if a == -b else 0

    def to_dict(self) -> dict:
        return {'name': self.name, 'axis': self.axis, 'first': self.first.to_dict(),
                'second': self.second.to_dict(), 'relation': self.relation}


def exemplar_relation(name: str, axis: str, grid_size: int | None = None, steps: int = DEFAULT_STEPS,
                      tol: float = GAP_TOL) -> RelationReport:
    """
    Deform a sublattice symmetric exemplar to its Hermitian (real axis) or anti Hermitian
    (imaginary axis) limit and compare the invariants of its two off diagonal blocks.

    The blocking ratio is +0.5 for the real axis and -0.5 for the imaginary axis, so that the
    exemplar has the requested line gap.

    :param name: 'a+s-wire' or 'aiii+s-chern'
    :param axis: 'real' or 'imaginary'
    :param grid_size: samples per axis
    :param steps: path certification steps
    :param tol: gap threshold
    :return: RelationReport
    """
    if name not in ('a+s-wire', 'aiii+s-chern'):
        raise UnknownId(f"exemplar <{name}> has no sublattice blocks")
    ratio = .5 if axis == 'real' else -.5
    H, spec = exemplar_family(name, {'ratio': ratio}, grid_size)
    deformed = line_gap_deform(H, axis, spec, steps=steps, tol=tol)
    n = H.size // 2
    h1 = deformed.map(lambda m: m[:n, n:])
    h2 = deformed.map(lambda m: m[n:, :n])
    invariant = winding_1d if EXEMPLARS[name].invariant == 'winding' else chern_2d
    report = RelationReport(name, axis, invariant(h1), invariant(h2))
    logger.info(f"📊 {name} ({axis}): blocks carry {report.first.value} and {report.second.value}")
    return report


########################################################################################################################
# catalog
########################################################################################################################

class CatalogEntry(NamedTuple):
    """A catalog item: a building block or an exemplar, with its Hamiltonians and claims."""
    id: str
    title: str
    class_name: str
    hamiltonians: tuple
    symmetry: SymmetrySpec
    claims: tuple
    harness: BlockHarness | None = None


def _block_entry(harness: BlockHarness) -> CatalogEntry:
    block: BlockSpec = BLOCKS[find_class(harness.class_name).name]
    hamiltonians = []
    for role, models in (('hermitian', harness.hermitian), ('point', harness.point)):
        for i, model in enumerate(models):
            for j, h in enumerate(model.hamiltonians):
                hamiltonians.append((f"{role}[{i}].H{j}", HamiltonianFamily.from_matrix(h)))
    claims = (f"{block.domain} → {block.codomain}: {block.hom.token()}",)
    return CatalogEntry(str(block.index), block.title, block.class_id.name, tuple(hamiltonians),
                        harness.hermitian[0].spec, claims, harness)


def _exemplar_entry(exemplar: Exemplar) -> CatalogEntry:
    family, spec = exemplar_family(exemplar.name)
    try:
        class_name = detect_class(spec).name
    except NHTopoError:
        class_name = ''
    claims = (f"{exemplar.invariant} at defaults {exemplar.defaults}",)
    return CatalogEntry(exemplar.name, exemplar.title, class_name, (('H', family),), spec, claims)


def catalog_ids() -> list:
    return [str(i) for i in sorted(block_harnesses())] + list(EXEMPLARS)


def catalog_get(entry_id) -> CatalogEntry:
    """
    :param entry_id: block index 1..18, block class name (e.g. "DIII+S_{+-},\\eta_{+-}" or
        "DIII+S_+-") or exemplar name
    :return: CatalogEntry
    """
    key = str(entry_id).strip()
    if key in EXEMPLARS:
        return _exemplar_entry(EXEMPLARS[key])
    harnesses = block_harnesses()
    if key.isdigit() and int(key) in harnesses:
        return _block_entry(harnesses[int(key)])
    try:
        c = find_class(key)
    except UnknownId:
        raise UnknownId(f"unknown catalog id <{entry_id}>")
    if c.name in BLOCKS:
        return _block_entry(harnesses[BLOCKS[c.name].index])
    raise UnknownId(f"class {c.name} is not a building block")


def catalog_family(name, params: dict | None = None, grid_size: int | None = None) -> tuple:
    """
    Family and symmetries of a catalog item, as referenced by model files.

    Exemplars take their own parameters; blocks take {generator: 'hermitian' | 'point',
    index: int, label: 'H0' | 'H1'}.

    :return: (HamiltonianFamily, SymmetrySpec)
    """
    if str(name) in EXEMPLARS:
        return exemplar_family(str(name), params, grid_size)
    entry = catalog_get(name)
    params = dict(params or {})
    role = params.pop('generator', 'hermitian')
    index = int(params.pop('index', 0))
    label = params.pop('label', 'H0')
    if params:
        raise ContractViolation(f"unknown block parameters {sorted(params)}")
    if role not in ('hermitian', 'point') or label not in ('H0', 'H1'):
        raise ContractViolation(f"block generators are hermitian/point with labels H0/H1, got {role}/{label}")
    models = entry.harness.hermitian if role == 'hermitian' else entry.harness.point
    if not 0 <= index < len(models):
        raise ContractViolation(f"block {entry.id} has {len(models)} {role} generators")
    model = models[index]
    return HamiltonianFamily.from_matrix(model.hamiltonians[int(label[1])]), model.spec
