#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import logging
import re
from enum import Enum
from typing import NamedTuple

import numpy as np
from scipy.linalg import eigvals
from scipy.optimize import linear_sum_assignment

from src.nhtopo.core import HamiltonianFamily, as_matrix, conjugate
from src.nhtopo.errors import ContractViolation, NotInCatalog, UnknownId
from src.nhtopo.utils import UNITARY_TOL

logger = logging.getLogger(__name__)


class SymmetryKind(Enum):
    """
    The eight types of internal symmetries, with flags (phi, c, kappa) in the relation
    u H_k^{phi, kappa} u^dagger = c H_{phi k}.
    """
    UNI = ('Uni', 1, 1, 1)
    TRS = ('TRS', -1, 1, 1)
    PHS = ('PHS', -1, -1, -1)
    CS = ('CS', 1, -1, -1)
    TRS_DAG = ('TRS†', -1, 1, -1)
    PHS_DAG = ('PHS†', -1, -1, 1)
    SLS = ('SLS', 1, -1, 1)
    PH = ('pH', 1, 1, -1)

    @property
    def label(self) -> str:
        return self.value[0]

    @property
    def phi(self) -> int:
        return self.value[1]

    @property
    def c(self) -> int:
        return self.value[2]

    @property
    def kappa(self) -> int:
        return self.value[3]

    @classmethod
    def parse(cls, text) -> 'SymmetryKind':
        """
        :param text: a kind or its label, e.g. "TRS", "TRS†", "TRS_dag", "pH"
        :return: SymmetryKind
        """
        if isinstance(text, SymmetryKind):
            return text
        key = str(text).strip().replace('†', 'dag').replace('_', '').replace('^', '').lower()
        for kind in cls:
            if kind.label.replace('†', 'dag').lower() == key:
                return kind
        raise ContractViolation(f"unknown symmetry kind <{text}>")

    @classmethod
    def from_flags(cls, phi: int, c: int, kappa: int) -> 'SymmetryKind':
        for kind in cls:
            if (kind.phi, kind.c, kind.kappa) == (phi, c, kappa):
                return kind
        raise ContractViolation(f"no symmetry kind with flags ({phi}, {c}, {kappa})")


class SymmetryOp(object):
    """
    A symmetry operator: a unitary matrix and its kind.

    Unitary kinds CS, pH and SLS are rescaled by a phase so that u^2 = +1. Antiunitary kinds
    record the sign of u u^*, which must be a multiple of the identity.
    """

    def __init__(self, kind, matrix, square_sign: int | None = None, tol: float = UNITARY_TOL) -> None:
        super().__init__()
        self.kind = SymmetryKind.parse(kind)
        u = as_matrix(matrix, name=f"{self.kind.label} matrix")
        identity = np.eye(u.shape[0])

        if np.max(np.abs(u.conj().T @ u - identity)) >= tol:
            raise ContractViolation(f"{self.kind.label} matrix is not unitary")

        sign = None
        if self.phi == -1:
            square = u @ u.conj()
            sign = 1 if square[0, 0].real > 0 else -1
            if np.max(np.abs(square - sign * identity)) >= 10 * tol:
                raise ContractViolation(f"{self.kind.label} matrix u u* is not +1 or -1")
        elif self.kind != SymmetryKind.UNI:
            square = u @ u
            phase = square[0, 0]
            if np.max(np.abs(square - phase * identity)) >= 10 * tol:
                raise ContractViolation(f"{self.kind.label} matrix squares to a non scalar")
            u = u / np.sqrt(phase)
            sign = 1

        if square_sign is not None and sign != square_sign:
            raise ContractViolation(f"{self.kind.label} declared square sign {square_sign}, found {sign}")

        u.flags.writeable = False
        self.matrix = u
        self.square_sign = sign

    @property
    def phi(self) -> int:
        return self.kind.phi

    @property
    def c(self) -> int:
        return self.kind.c

    @property
    def kappa(self) -> int:
        return self.kind.kappa

    @property
    def size(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"SymmetryOp({self.kind.label}, size={self.size}, square_sign={self.square_sign})"


def compose(a: SymmetryOp, b: SymmetryOp) -> SymmetryOp:
    """
    The symmetry obtained by applying b and then a; its matrix is u_a u_b^{phi_a}.

    :return: SymmetryOp of the product kind, phase normalized
    """
    kind = SymmetryKind.from_flags(a.phi * b.phi, a.c * b.c, a.kappa * b.kappa)
    other = b.matrix.conj() if a.phi == -1 else b.matrix
    return SymmetryOp(kind, a.matrix @ other)


def commutation_sign(a: SymmetryOp, b: SymmetryOp, tol: float = UNITARY_TOL) -> int | None:
    """
    Sign epsilon of u_a u_b^{phi_a} = epsilon u_b u_a, for b of a unitary kind.

    :return: +1, -1 or None if the two operators neither commute nor anticommute
    """
    if b.phi != 1:
        raise ContractViolation(f"commutation signs are defined against unitary kinds, got {b.kind.label}")
    lhs = a.matrix @ (b.matrix.conj() if a.phi == -1 else b.matrix)
    rhs = b.matrix @ a.matrix
    for sign in (1, -1):
        if np.max(np.abs(lhs - sign * rhs)) < 10 * tol:
            return sign
    return None


def _pair_key(a: SymmetryKind, b: SymmetryKind) -> frozenset:
    return frozenset((a, b))


def _rephased(time: SymmetryOp, particle: SymmetryOp, tol: float = UNITARY_TOL) -> SymmetryOp:
    """
    Multiply the particle-hole operator by a phase so that u_T u_C^* = u_C u_T^*.

    :param time: TRS (or TRS†) operator, kept as is
    :param particle: PHS (or PHS†) operator
    :return: rephased particle-hole operator
    """
    lhs = time.matrix @ particle.matrix.conj()
    rhs = particle.matrix @ time.matrix.conj()
    ratio = np.vdot(rhs, lhs)
    ratio = ratio / abs(ratio)
    if np.max(np.abs(lhs - ratio * rhs)) >= 10 * tol:
        raise ContractViolation(f"relative phase of {time.kind.label} and {particle.kind.label} cannot be fixed")
    return SymmetryOp(particle.kind, np.exp(.5j * np.angle(ratio)) * particle.matrix, tol=tol)


class SymmetrySpec(object):
    """
    A set of symmetry operators, at most one per kind, with the commutation signs of every
    (operator, unitary operator) pair.

    When TRS and PHS (or TRS† and PHS†) are both present, the particle-hole operator is
    rephased so that u_T u_C^* = u_C u_T^*.
    """
    _unitary_kinds = (SymmetryKind.CS, SymmetryKind.SLS, SymmetryKind.PH)

    def __init__(self, ops=(), commutation_signs: dict | None = None) -> None:
        super().__init__()
        ops = tuple(ops)
        kinds = [op.kind for op in ops]
        if len(set(kinds)) != len(kinds):
            raise ContractViolation("at most one operator per symmetry kind")
        if len({op.size for op in ops}) > 1:
            raise ContractViolation("all symmetry operators should share the matrix size")

        by_kind = {op.kind: op for op in ops}
        for time, particle in ((SymmetryKind.TRS, SymmetryKind.PHS), (SymmetryKind.TRS_DAG, SymmetryKind.PHS_DAG)):
            if time in by_kind and particle in by_kind:
                fixed = _rephased(by_kind[time], by_kind[particle])
                ops = tuple(fixed if op.kind == particle else op for op in ops)
        self.ops = ops

        signs = {}
        for a in ops:
            for b in ops:
                if a is b or b.kind not in self._unitary_kinds or a.kind == SymmetryKind.UNI:
                    continue
                key = _pair_key(a.kind, b.kind)
                if key in signs:
                    continue
                signs[key] = commutation_sign(a, b)
        if commutation_signs:
            for pair, declared in commutation_signs.items():
                key = _pair_key(*(SymmetryKind.parse(k) for k in pair))
                if key not in signs:
                    raise ContractViolation(f"commutation sign declared for absent pair {sorted(k.label for k in key)}")
                if signs[key] != declared:
                    raise ContractViolation(
                        f"declared commutation sign {declared} for {sorted(k.label for k in key)} "
                        f"does not match the operators ({signs[key]})")
        self.commutation_signs = signs

    @property
    def size(self) -> int | None:
        return self.ops[0].size if self.ops else None

    def get(self, kind) -> SymmetryOp | None:
        kind = SymmetryKind.parse(kind)
        for op in self.ops:
            if op.kind == kind:
                return op
        return None

    def sign(self, a, b) -> int | None:
        return self.commutation_signs.get(_pair_key(SymmetryKind.parse(a), SymmetryKind.parse(b)))

    def __iter__(self):
        return iter(self.ops)

    def __len__(self) -> int:
        return len(self.ops)

    def __repr__(self) -> str:
        return f"SymmetrySpec({', '.join(op.kind.label for op in self.ops)})"


class SymmetryClassId(NamedTuple):
    """One of the 54 internal symmetry classes."""
    name: str
    family: str
    s: int
    t: int | None = None

    @property
    def is_complex(self) -> bool:
        return self.family in ('cAZ', 'cAZU')

    @property
    def period(self) -> int:
        return 2 if self.is_complex else 8

    def __str__(self) -> str:
        return self.name


# name, family, s, t, class of iH
_CATALOG = (
    ('A', 'cAZ', 0, None, 'A'),
    ('AIII', 'cAZ', 1, None, 'A+\\eta'),
    ('AI', 'rAZ', 0, None, 'D^\\dag'),
    ('BDI', 'rAZ', 1, None, 'D+\\eta_+'),
    ('D', 'rAZ', 2, None, 'D'),
    ('DIII', 'rAZ', 3, None, 'D+\\eta_-'),
    ('AII', 'rAZ', 4, None, 'C^\\dag'),
    ('CII', 'rAZ', 5, None, 'C+\\eta_+'),
    ('C', 'rAZ', 6, None, 'C'),
    ('CI', 'rAZ', 7, None, 'C+\\eta_-'),
    ('AI^\\dag', 'rAZd', 0, None, 'AI^\\dag'),
    ('BDI^\\dag', 'rAZd', 1, None, 'AI+\\eta_+'),
    ('D^\\dag', 'rAZd', 2, None, 'AI'),
    ('DIII^\\dag', 'rAZd', 3, None, 'AI+\\eta_-'),
    ('AII^\\dag', 'rAZd', 4, None, 'AII^\\dag'),
    ('CII^\\dag', 'rAZd', 5, None, 'AII+\\eta_+'),
    ('C^\\dag', 'rAZd', 6, None, 'AII'),
    ('CI^\\dag', 'rAZd', 7, None, 'AII+\\eta_-'),
    ('A+\\eta', 'cAZU', 0, 0, 'AIII'),
    ('A+S', 'cAZU', 0, 1, 'A+S'),
    ('AIII+S_+,\\eta_+', 'cAZU', 1, 0, 'AIII+S_+,\\eta_+'),
    ('AIII+S_-,\\eta_-', 'cAZU', 1, 1, 'AIII+S_-,\\eta_-'),
    ('AI+\\eta_+', 'rAZU', 0, 0, 'BDI^\\dag'),
    ('AI+S_-', 'rAZU', 0, 1, 'AII+S_-'),
    ('AI+\\eta_-', 'rAZU', 0, 2, 'DIII^\\dag'),
    ('AI+S_+', 'rAZU', 0, 3, 'AI+S_+'),
    ('BDI+S_{++},\\eta_{++}', 'rAZU', 1, 0, 'BDI+S_{++},\\eta_{++}'),
    ('BDI+S_{-+},\\eta_{+-}', 'rAZU', 1, 1, 'DIII+S_{-+},\\eta_{-+}'),
    ('BDI+S_{--},\\eta_{--}', 'rAZU', 1, 2, 'DIII+S_{--},\\eta_{++}'),
    ('BDI+S_{+-},\\eta_{-+}', 'rAZU', 1, 3, 'BDI+S_{+-},\\eta_{-+}'),
    ('D+\\eta_+', 'rAZU', 2, 0, 'BDI'),
    ('D+S_+', 'rAZU', 2, 1, 'D+S_+'),
    ('D+\\eta_-', 'rAZU', 2, 2, 'DIII'),
    ('D+S_-', 'rAZU', 2, 3, 'D+S_-'),
    ('DIII+S_{--},\\eta_{++}', 'rAZU', 3, 0, 'BDI+S_{--},\\eta_{--}'),
    ('DIII+S_{-+},\\eta_{-+}', 'rAZU', 3, 1, 'BDI+S_{-+},\\eta_{+-}'),
    ('DIII+S_{++},\\eta_{--}', 'rAZU', 3, 2, 'DIII+S_{++},\\eta_{--}'),
    ('DIII+S_{+-},\\eta_{+-}', 'rAZU', 3, 3, 'DIII+S_{+-},\\eta_{+-}'),
    ('AII+\\eta_+', 'rAZU', 4, 0, 'CII^\\dag'),
    ('AII+S_-', 'rAZU', 4, 1, 'AI+S_-'),
    ('AII+\\eta_-', 'rAZU', 4, 2, 'CI^\\dag'),
    ('AII+S_+', 'rAZU', 4, 3, 'AII+S_+'),
    ('CII+S_{++},\\eta_{++}', 'rAZU', 5, 0, 'CII+S_{++},\\eta_{++}'),
    ('CII+S_{-+},\\eta_{+-}', 'rAZU', 5, 1, 'CI+S_{-+},\\eta_{-+}'),
    ('CII+S_{--},\\eta_{--}', 'rAZU', 5, 2, 'CI+S_{--},\\eta_{++}'),
    ('CII+S_{+-},\\eta_{-+}', 'rAZU', 5, 3, 'CII+S_{+-},\\eta_{-+}'),
    ('C+\\eta_+', 'rAZU', 6, 0, 'CII'),
    ('C+S_+', 'rAZU', 6, 1, 'C+S_+'),
    ('C+\\eta_-', 'rAZU', 6, 2, 'CI'),
    ('C+S_-', 'rAZU', 6, 3, 'C+S_-'),
    ('CI+S_{--},\\eta_{++}', 'rAZU', 7, 0, 'CII+S_{--},\\eta_{--}'),
    ('CI+S_{-+},\\eta_{-+}', 'rAZU', 7, 1, 'CII+S_{-+},\\eta_{+-}'),
    ('CI+S_{++},\\eta_{--}', 'rAZU', 7, 2, 'CI+S_{++},\\eta_{--}'),
    ('CI+S_{+-},\\eta_{+-}', 'rAZU', 7, 3, 'CI+S_{+-},\\eta_{+-}'),
)

CATALOG = tuple(SymmetryClassId(name, family, s, t) for name, family, s, t, _ in _CATALOG)
_BY_NAME = {c.name: c for c in CATALOG}
_I_MAP = {name: image for name, _, _, _, image in _CATALOG}
_BY_INDICES = {(c.family, c.s, c.t): c for c in CATALOG}

# names of the ten AZ classes by (sign of TT*, sign of CC*)
_AZ_NAMES = {(1, None): 'AI', (1, 1): 'BDI', (None, 1): 'D', (-1, 1): 'DIII', (-1, None): 'AII',
             (-1, -1): 'CII', (None, -1): 'C', (1, -1): 'CI'}

_PART_PATTERN = re.compile(r'^(S|\\eta)(?:_\{?([+-]+)\}?)?$')


def _short_name(name: str) -> str:
    name = name.replace('†', 'dag').replace('η', 'eta')
    return re.sub(r'[\\{}^, ]', '', name)


def _label_parts(name: str) -> list:
    base, rest = name.split('+', 1)
    parts = []
    for part in rest.split(','):
        match = _PART_PATTERN.match(part)
        kind = 'S' if match.group(1) == 'S' else 'eta'
        parts.append((base, part, kind, match.group(2) or ''))
    return parts


def _build_lookups():
    aliases = {}
    labels = {}
    for c in CATALOG:
        aliases[_short_name(c.name)] = c
        if c.t is None:
            continue
        for base, part, kind, signs in _label_parts(c.name):
            labels[(c.family, c.s, kind, signs)] = c
            aliases[_short_name(f'{base}+{part}')] = c
    return aliases, labels


_ALIASES, _LABELS = _build_lookups()


def catalog() -> tuple:
    """
    :return: the 54 symmetry classes in table order
    """
    return CATALOG


def find_class(name) -> SymmetryClassId:
    """
    Look up a class by its display name (e.g. "DIII+S_{+-},\\eta_{+-}") or a short form with
    backslashes, braces, carets, commas and spaces removed (e.g. "AIdag", "BDI+eta_+-").

    :param name: class name or SymmetryClassId
    :return: SymmetryClassId
    """
    if isinstance(name, SymmetryClassId):
        return name
    if name in _BY_NAME:
        return _BY_NAME[name]
    key = _short_name(str(name))
    if key in _ALIASES:
        return _ALIASES[key]
    raise UnknownId(f"unknown symmetry class <{name}>")


def extra_signs(c) -> dict:
    """
    Commutation signs carried by the label of an AZ+U class, e.g. {'S': '+-', 'eta': '-+'} for
    BDI+S_{+-},\\eta_{-+}. Signs follow the order (TRS, PHS), or CS for the complex chiral classes.

    :param c: SymmetryClassId or class name
    :return: dict from 'S' / 'eta' to sign strings, empty for AZ and AZ dagger classes
    """
    c = find_class(c)
    if c.t is None:
        return {}
    return {kind: signs for _, _, kind, signs in _label_parts(c.name)}


def class_from_indices(family: str, s: int, t: int | None = None) -> SymmetryClassId:
    """
    :return: the class with the given family and indices, s and t reduced by their periods
    """
    s = s % (2 if family in ('cAZ', 'cAZU') else 8)
    if t is not None:
        t = t % (2 if family == 'cAZU' else 4)
    try:
        return _BY_INDICES[(family, s, t)]
    except KeyError:
        raise UnknownId(f"no class in family {family} with s={s}, t={t}")


def i_map(c) -> SymmetryClassId:
    """
    The class of iH for H in class c.

    :param c: SymmetryClassId or class name
    :return: SymmetryClassId
    """
    return _BY_NAME[_I_MAP[find_class(c).name]]


def orbit_representatives() -> tuple:
    """
    :return: the first class (in table order) of every orbit of the i-map
    """
    seen = set()
    representatives = []
    for c in CATALOG:
        if c in seen:
            continue
        seen.update((c, i_map(c)))
        representatives.append(c)
    return tuple(representatives)


def verify_symmetry(H: HamiltonianFamily, op: SymmetryOp) -> float:
    """
    Largest violation of u H_k^{phi, kappa} u^dagger = c H_{phi k} over the grid.

    :param H: sampled family
    :param op: symmetry operator
    :return: largest spectral norm of the difference over the grid, 0 when the symmetry holds exactly
    """
    if op.size != H.size:
        raise ContractViolation(f"operator size {op.size} differs from Hamiltonian size {H.size}")
    if op.phi == -1 and H.dim > 0 and H.grid_size % 2:
        raise ContractViolation("antiunitary symmetries need an even grid size")

    u = op.matrix
    lhs = u @ conjugate(H.samples, op.phi, op.kappa) @ u.conj().T
    rhs = op.c * (H.negated().samples if op.phi == -1 else H.samples)
    return float(np.max(np.linalg.norm(lhs - rhs, ord=2, axis=(-2, -1))))


def spectral_symmetry_residual(H: HamiltonianFamily, kind) -> float:
    """
    Distance between the spectrum at phi k and the image of the spectrum at k under the
    eigenvalue map of the kind: E -> c E^* when phi kappa = -1, E -> c E otherwise.

    :param H: sampled family
    :param kind: SymmetryOp, SymmetryKind or label
    :return: largest matching distance over the grid
    """
    kind = SymmetryKind.parse(kind.kind if isinstance(kind, SymmetryOp) else kind)
    target_family = H.negated() if kind.phi == -1 else H
    residual = 0.
    for (index, h), (_, target) in zip(H.points(), target_family.points()):
        energies = eigvals(h)
        mapped = kind.c * (energies.conj() if kind.phi * kind.kappa == -1 else energies)
        cost = np.abs(mapped[:, None] - eigvals(target)[None, :])
        rows, cols = linear_sum_assignment(cost)
        residual = max(residual, float(cost[rows, cols].max()))
    return residual


def _sign_string(spec_ops: dict, anchors: tuple, extra: SymmetryOp) -> str:
    signs = ''
    for kind in anchors:
        sign = commutation_sign(spec_ops[kind], extra)
        if sign is None:
            raise NotInCatalog(f"{spec_ops[kind].kind.label} and {extra.kind.label} neither commute nor anticommute")
        signs += '+' if sign == 1 else '-'
    return signs


def detect_class(spec: SymmetrySpec) -> SymmetryClassId:
    """
    Identify the catalog class of a generator presentation.

    Accepted presentations are AZ generators (TRS, PHS, CS), AZ dagger generators (TRS†, PHS†)
    and at most one SLS or pH operator. An AZ antiunitary together with an AZ dagger one is
    replaced by their unitary product; SLS together with pH is presented as CS and pH.

    :param spec: symmetry presentation
    :return: SymmetryClassId
    """
    ops = {op.kind: op for op in spec}
    if SymmetryKind.UNI in ops:
        raise NotInCatalog("commuting unitary symmetries must be block diagonalized before classification")

    base = ops.get(SymmetryKind.TRS) or ops.get(SymmetryKind.PHS)
    if base is not None:
        for kind in (SymmetryKind.TRS_DAG, SymmetryKind.PHS_DAG):
            if kind in ops:
                product = compose(ops.pop(kind), base)
                if product.kind in ops:
                    raise NotInCatalog(f"presentation has more than one {product.kind.label} operator")
                logger.debug(f"{kind.label} combined with {base.kind.label} into {product.kind.label}")
                ops[product.kind] = product

    if SymmetryKind.SLS in ops and SymmetryKind.PH in ops:
        if SymmetryKind.CS in ops or base is not None:
            raise NotInCatalog("SLS and pH together with further generators is not a catalog presentation")
        ops[SymmetryKind.CS] = compose(ops.pop(SymmetryKind.SLS), ops[SymmetryKind.PH])

    extras = [ops[k] for k in (SymmetryKind.SLS, SymmetryKind.PH) if k in ops]
    if len(extras) > 1:
        raise NotInCatalog("at most one of SLS or pH is allowed")
    extra = extras[0] if extras else None

    # a single antiunitary together with CS determines the other antiunitary
    for first, second in ((SymmetryKind.TRS, SymmetryKind.PHS), (SymmetryKind.TRS_DAG, SymmetryKind.PHS_DAG)):
        if SymmetryKind.CS in ops and (first in ops) != (second in ops):
            present = ops[first] if first in ops else ops[second]
            derived = compose(present, ops[SymmetryKind.CS])
            ops[derived.kind] = derived

    dagger = {k: ops[k].square_sign if k in ops else None for k in (SymmetryKind.TRS_DAG, SymmetryKind.PHS_DAG)}
    if any(v is not None for v in dagger.values()):
        if extra is not None:
            raise NotInCatalog("AZ dagger generators combine with SLS or pH only through an AZ generator")
        name = _AZ_NAMES[(dagger[SymmetryKind.TRS_DAG], dagger[SymmetryKind.PHS_DAG])] + '^\\dag'
        return _BY_NAME[name]

    t_sign = ops[SymmetryKind.TRS].square_sign if SymmetryKind.TRS in ops else None
    c_sign = ops[SymmetryKind.PHS].square_sign if SymmetryKind.PHS in ops else None
    if t_sign is None and c_sign is None:
        if SymmetryKind.CS in ops:
            if extra is None:
                return _BY_NAME['AIII']
            family, s, signs = 'cAZU', 1, _sign_string(ops, (SymmetryKind.CS,), extra)
        else:
            if extra is None:
                return _BY_NAME['A']
            family, s, signs = 'cAZU', 0, ''
    else:
        base_class = _BY_NAME[_AZ_NAMES[(t_sign, c_sign)]]
        if extra is None:
            return base_class
        anchors = tuple(k for k in (SymmetryKind.TRS, SymmetryKind.PHS) if k in ops)
        family, s, signs = 'rAZU', base_class.s, _sign_string(ops, anchors, extra)

    kind = 'S' if extra.kind == SymmetryKind.SLS else 'eta'
    try:
        return _LABELS[(family, s, kind, signs)]
    except KeyError:
        raise NotInCatalog(f"no catalog class with {kind} signs ({signs}) over s={s} in family {family}")
