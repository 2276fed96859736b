#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import logging
from dataclasses import dataclass

import numpy as np
from pfapack import pfaffian as pf
from scipy.linalg import eigvalsh, null_space, svdvals

from src.nhtopo.core import HamiltonianFamily
from src.nhtopo.errors import (ContractViolation, Gapless, NotHermitian, NotInvertible, NotRealizable,
                               ReferenceOnSpectrum, Singular, Unquantized)
from src.nhtopo.utils import GAP_TOL, HERMITIAN_TOL, QUANTIZATION_TOL

logger = logging.getLogger(__name__)

KINDS = ('winding', 'det_winding', 'chern', 'signature', 'sign_det', 'sign_pf', 'z2_pair')
SIGN_DET_GAUGES = (1., -1j)


@dataclass(frozen=True)
class InvariantValue:
    """
    A quantized invariant together with the distance of its raw value from the quantized one.
    """
    kind: str
    value: int | tuple
    residual: float = 0.

    @property
    def trusted(self) -> bool:
        return self.residual < QUANTIZATION_TOL

    def to_dict(self) -> dict:
        value = list(self.value) if isinstance(self.value, tuple) else self.value
        return {'kind': self.kind, 'value': value, 'residual': self.residual}


def _single_matrix(H) -> np.ndarray:
    if isinstance(H, HamiltonianFamily):
        return H.matrix
    m = np.asarray(H, dtype=complex)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ContractViolation(f"expected a square matrix, got shape {m.shape}")
    return m


def _quantize(kind: str, raw: float) -> InvariantValue:
    value = int(np.rint(raw))
    residual = float(abs(raw - value))
    if residual >= QUANTIZATION_TOL:
        raise Unquantized(f"{kind} raw value {raw:.4f} is not close to an integer")
    return InvariantValue(kind, value, residual)


def winding_1d(h: HamiltonianFamily, tol: float = GAP_TOL, kind: str = 'winding') -> InvariantValue:
    """
    Winding number of det h(k) around the origin, from phase increments wrapped into (-pi, pi].

    :param h: invertible one dimensional family with at least 8 grid points
    :param tol: invertibility threshold on the smallest singular value
    :param kind: label of the returned value
    :return: InvariantValue
    """
    if h.dim != 1:
        raise ContractViolation(f"winding number needs a 1D family, got dim={h.dim}")
    if h.grid_size < 8:
        raise ContractViolation(f"winding number needs at least 8 grid points, got {h.grid_size}")
    margin = min(float(svdvals(m).min()) for m in h.flat())
    if margin <= tol:
        raise NotInvertible(f"smallest singular value {margin:.3e} is not above {tol:.1e}")

    dets = np.linalg.det(h.samples)
    steps = np.angle(np.roll(dets, -1) / dets)
    if np.max(np.abs(steps)) >= np.pi * (1 - QUANTIZATION_TOL):
        raise Unquantized("phase of det h jumps by almost pi between neighbouring grid points, refine the grid")
    return _quantize(kind, float(np.sum(steps)) / (2 * np.pi))


def det_winding_point_gap(H: HamiltonianFamily, e_ref: complex = 0., tol: float = GAP_TOL) -> InvariantValue:
    """
    Spectral winding number of a point gapped family around the reference energy.

    :param H: one dimensional family
    :param e_ref: reference point in the complex energy plane
    :param tol: minimal distance of the reference from the spectrum
    :return: InvariantValue of kind det_winding
    """
    shifted = H.map(lambda m: m - e_ref * np.eye(H.size))
    margin = min(float(svdvals(m).min()) for m in shifted.flat())
    if margin <= tol:
        raise ReferenceOnSpectrum(f"reference energy {e_ref} lies on the spectrum (margin {margin:.3e})")
    return winding_1d(shifted, tol, kind='det_winding')


def chern_2d(h: HamiltonianFamily, tol: float = GAP_TOL) -> InvariantValue:
    """
    Chern number of the bands below zero energy, computed from gauge invariant plaquette phases of
    determinant link variables between occupied frames on neighbouring grid points.

    :param h: Hermitian two dimensional family, gapped at zero
    :param tol: gap threshold
    :return: InvariantValue of kind chern
    """
    if h.dim != 2:
        raise ContractViolation(f"Chern number needs a 2D family, got dim={h.dim}")
    if h.grid_size < 6:
        raise ContractViolation(f"Chern number needs at least 6 grid points per axis, got {h.grid_size}")
    if not h.is_hermitian(HERMITIAN_TOL):
        raise NotHermitian(f"Hermiticity residual {h.hermitian_residual():.3e}")

    energies, vectors = np.linalg.eigh(h.samples)
    if np.abs(energies).min() <= tol:
        raise Gapless(f"spectrum comes within {np.abs(energies).min():.3e} of zero energy")
    occupied = np.sum(energies < 0, axis=-1)
    if occupied.min() != occupied.max():
        raise Gapless("number of occupied bands changes over the Brillouin zone")
    n_occ = int(occupied.flat[0])
    if n_occ == 0:
        return InvariantValue('chern', 0, 0.)

    frames = vectors[..., :n_occ]
    links = []
    for axis in (0, 1):
        overlap = np.swapaxes(frames.conj(), -1, -2) @ np.roll(frames, -1, axis=axis)
        det = np.linalg.det(overlap)
        if np.abs(det).min() < tol:
            raise Unquantized("occupied frames of neighbouring points are orthogonal, refine the grid")
        links.append(det / np.abs(det))

    u1, u2 = links
    field = np.angle(u1 * np.roll(u2, -1, axis=0) / (np.roll(u1, -1, axis=1) * u2))
    return _quantize('chern', float(np.sum(field)) / (2 * np.pi))


def signature_0d(H, tol: float = GAP_TOL) -> InvariantValue:
    """
    Number of negative eigenvalues of a Hermitian matrix.

    :param H: Hermitian matrix or zero dimensional family
    :param tol: gap threshold
    :return: InvariantValue of kind signature
    """
    m = _single_matrix(H)
    if m.shape[0] == 0:
        return InvariantValue('signature', 0)
    if np.max(np.abs(m - m.conj().T)) >= HERMITIAN_TOL:
        raise NotHermitian("matrix is not Hermitian")
    energies = eigvalsh(m)
    if np.abs(energies).min() <= tol:
        raise Gapless(f"zero energy within {np.abs(energies).min():.3e}")
    return InvariantValue('signature', int(np.sum(energies < 0)))


def sign_det(H, phase: complex | None = None, tol: float = GAP_TOL) -> InvariantValue:
    """
    Sign of the determinant of phase * H, which must be real.

    Without an explicit phase the gauges of SIGN_DET_GAUGES are tried in order: H itself real
    (class AI blocks with T = 1) and -iH real (class D dagger with C = 1).

    :param H: matrix or zero dimensional family
    :param phase: gauge factor making the matrix real
    :param tol: singularity threshold
    :return: InvariantValue of kind sign_det
    """
    raw = _single_matrix(H)
    gauges = SIGN_DET_GAUGES if phase is None else (phase,)
    for gauge in gauges:
        m = gauge * raw
        if np.max(np.abs(m.imag), initial=0.) < HERMITIAN_TOL:
            break
    else:
        raise NotRealizable(f"no gauge in {gauges} makes the matrix real")
    det = np.linalg.det(m.real) if m.shape[0] else 1.
    if abs(det) <= tol:
        raise Singular(f"determinant {det:.3e} vanishes")
    return InvariantValue('sign_det', 1 if det > 0 else -1)


def pfaffian_value(m) -> complex:
    """
    Pfaffian of an antisymmetric matrix; 1 for the empty matrix.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape[0] == 0:
        return 1.
    if np.max(np.abs(m + m.T)) >= HERMITIAN_TOL:
        raise ContractViolation("Pfaffian needs an antisymmetric matrix")
    if m.shape[0] % 2:
        return 0.
    return complex(pf.pfaffian((m - m.T) / 2))


def sign_pf(M, tol: float = GAP_TOL) -> InvariantValue:
    """
    Sign of the Pfaffian of a real antisymmetric matrix.

    :param M: real antisymmetric matrix
    :param tol: singularity threshold
    :return: InvariantValue of kind sign_pf
    """
    m = _single_matrix(M)
    if np.max(np.abs(m.imag), initial=0.) >= HERMITIAN_TOL:
        raise NotRealizable("Pfaffian sign needs a real matrix")
    value = pfaffian_value(m.real).real
    if abs(value) <= tol:
        raise Singular(f"Pfaffian {value:.3e} vanishes")
    return InvariantValue('sign_pf', 1 if value > 0 else -1)


def z2_pair(H, sublattice, tol: float = GAP_TOL) -> InvariantValue:
    """
    Determinant signs of the two off diagonal blocks h1 = P+ H P-, h2 = P- H P+ of a real
    Hamiltonian anticommuting with a real sublattice operator.

    :param H: real matrix
    :param sublattice: real operator with square one
    :param tol: singularity threshold
    :return: InvariantValue of kind z2_pair with value (sign det h1, sign det h2)
    """
    m = _single_matrix(H)
    s = _single_matrix(sublattice)
    if np.max(np.abs(s.imag)) >= HERMITIAN_TOL:
        raise NotRealizable("sublattice operator is not real")
    identity = np.eye(s.shape[0])
    upper = null_space(s.real - identity)
    lower = null_space(s.real + identity)
    if upper.shape[1] != lower.shape[1]:
        raise Singular("sublattice sectors of different size carry singular blocks")
    h1 = upper.T @ m @ lower
    h2 = lower.T @ m @ upper
    return InvariantValue('z2_pair', (sign_det(h1, 1., tol).value, sign_det(h2, 1., tol).value))
