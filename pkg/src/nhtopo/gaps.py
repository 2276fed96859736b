#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import logging
from dataclasses import dataclass

import numpy as np
import pandas as pd
from scipy.linalg import eig, eigvals, inv, svdvals

from src.nhtopo.core import HamiltonianFamily
from src.nhtopo.errors import ContractViolation, GapClosedAlongPath, NearDefective, NoLineGap, SymmetryBroken
from src.nhtopo.symmetry import SymmetrySpec, verify_symmetry
from src.nhtopo.utils import DEFAULT_STEPS, GAP_TOL

logger = logging.getLogger(__name__)

AXES = ('real', 'imaginary')


def _check_axis(axis: str) -> str:
    if axis == 'imag':
        axis = 'imaginary'
    if axis not in AXES:
        raise ContractViolation(f"axis should be one of {AXES}, got <{axis}>")
    return axis


@dataclass(frozen=True)
class GapReport:
    """
    Margins of the three gap conditions over the whole grid, and the verdicts at tolerance ``tol``.
    """
    point_gap_margin: float
    real_line_margin: float
    imag_line_margin: float
    diagonalizability_margin: float
    tol: float

    @property
    def real_line_gapped(self) -> bool:
        return self.real_line_margin > self.tol

    @property
    def imag_line_gapped(self) -> bool:
        return self.imag_line_margin > self.tol

    @property
    def point_gapped(self) -> bool:
        # a line gap keeps every eigenvalue away from zero even where the smallest singular value is tiny
        return self.point_gap_margin > self.tol or self.real_line_gapped or self.imag_line_gapped

    def line_margin(self, axis: str) -> float:
        return self.real_line_margin if _check_axis(axis) == 'real' else self.imag_line_margin

    def to_dict(self) -> dict:
        return {
            'point_gap_margin': self.point_gap_margin,
            'real_line_margin': self.real_line_margin,
            'imag_line_margin': self.imag_line_margin,
            'diagonalizability_margin': self.diagonalizability_margin,
            'tol': self.tol,
            'point_gapped': self.point_gapped,
            'real_line_gapped': self.real_line_gapped,
            'imag_line_gapped': self.imag_line_gapped,
        }


def gap_report(H: HamiltonianFamily, tol: float = GAP_TOL) -> GapReport:
    """
    Measure point, real line and imaginary line gaps on every grid point.

    :param H: sampled family
    :param tol: verdict threshold
    :return: GapReport
    """
    if tol <= 0:
        raise ContractViolation("tolerance should be positive")

    point, real, imag, diagonal = np.inf, np.inf, np.inf, np.inf
    for h in H.flat():
        point = min(point, float(svdvals(h).min()))
        energies, vectors = eig(h)
        real = min(real, float(np.abs(energies.real).min()))
        imag = min(imag, float(np.abs(energies.imag).min()))
        diagonal = min(diagonal, 1. / float(np.linalg.cond(vectors)))
    return GapReport(point, real, imag, diagonal, tol)


def hermitize(H: HamiltonianFamily) -> HamiltonianFamily:
    """
    Double H into the Hermitian family [[0, H], [H^dagger, 0]], which anticommutes with sigma_z and
    whose eigenvalues are plus and minus the singular values of H.
    """
    n = H.size

    def double(h):
        out = np.zeros((2 * n, 2 * n), dtype=complex)
        out[:n, n:] = h
        out[n:, :n] = h.conj().T
        return out

    return H.map(double)


def _flatten_matrix(h: np.ndarray, axis: str) -> np.ndarray:
    energies, right = eig(h)
    left = inv(right)
    if axis == 'real':
        signs = np.sign(energies.real)
    else:
        # spectral flattening of iH, rotated back: Q = i (P_up - P_down)
        signs = 1j * np.sign(energies.imag)
    return right @ np.diag(signs) @ left


def flatten(H: HamiltonianFamily, axis: str = 'real', tol: float = GAP_TOL) -> HamiltonianFamily:
    """
    Spectral flattening Q = P+ - P- of a line gapped family, with projectors built from right
    eigenvectors V and left eigenvectors V^-1.

    For the imaginary axis the flattening of iH is rotated back, so Q = i (P_up - P_down) and Q^2 = -1.

    :param H: line gapped family
    :param axis: 'real' or 'imaginary'
    :param tol: gap and diagonalizability threshold
    :return: flattened family
    """
    axis = _check_axis(axis)
    report = gap_report(H, tol)
    if report.line_margin(axis) <= tol:
        raise NoLineGap(f"{axis} line gap margin {report.line_margin(axis):.3e} is not above {tol:.1e}")
    if report.diagonalizability_margin <= tol:
        raise NearDefective(f"eigenvector condition number {1 / report.diagonalizability_margin:.3e} exceeds {1 / tol:.1e}")
    return H.map(lambda h: _flatten_matrix(h, axis))


def line_gap_deform(H: HamiltonianFamily, axis: str, spec: SymmetrySpec, steps: int = DEFAULT_STEPS,
                    tol: float = GAP_TOL) -> HamiltonianFamily:
    """
    Deform a line gapped family into a Hermitian (real axis) or anti Hermitian (imaginary axis) one.

    The flattened family Q is interpolated linearly to its Hermitian or anti Hermitian part H';
    at every sampled t the interpolant must keep the line gap and all symmetries of spec.

    :param H: line gapped family satisfying spec
    :param axis: 'real' or 'imaginary'
    :param spec: symmetries to preserve
    :param steps: number of sampled interpolation parameters, endpoints included
    :param tol: gap and residual threshold
    :return: the deformed family H'
    """
    axis = _check_axis(axis)
    if steps < 2:
        raise ContractViolation("path certification needs at least two steps")
    for op in spec:
        residual = verify_symmetry(H, op)
        if residual >= tol:
            raise SymmetryBroken(f"{op.kind.label} residual {residual:.3e} on the input family")

    Q = flatten(H, axis, tol)
    sign = 1 if axis == 'real' else -1
    target = Q.map(lambda q: (q + sign * q.conj().T) / 2)

    for t in np.linspace(0, 1, steps):
        path = HamiltonianFamily((1 - t) * Q.samples + t * target.samples, dim=H.dim)
        margin = min(
            float(np.abs(getattr(eigvals(h), 'real' if axis == 'real' else 'imag')).min()) for h in path.flat())
        if margin <= tol:
            raise GapClosedAlongPath(f"{axis} line gap closes at t={t:.2f} (margin {margin:.3e})")
        for op in spec:
            residual = verify_symmetry(path, op)
            if residual >= tol:
                raise SymmetryBroken(f"{op.kind.label} residual {residual:.3e} at t={t:.2f}")
        logger.debug(f"path certified at t={t:.2f}, margin {margin:.3e}")

    logger.info(f"📊 {axis} line gap deformation certified at {steps} steps")
    return target


def spectrum_frame(H: HamiltonianFamily) -> pd.DataFrame:
    """
    Complex spectrum at every grid point, one row per eigenvalue.

    :param H: sampled family
    :return: DataFrame with momentum columns k0..k{d-1}, band index, real and imaginary parts
    """
    ks = H.k_points().reshape(-1, H.dim) if H.dim else np.zeros((1, 0))
    rows = []
    for k, h in zip(ks, H.flat()):
        energies = np.sort_complex(eigvals(h))
        for band, energy in enumerate(energies):
            rows.append(dict({f'k{i}': k[i] for i in range(H.dim)}, band=band, re=energy.real, im=energy.imag))
    return pd.DataFrame(rows)
