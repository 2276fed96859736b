#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026
import json
import logging
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np
import pandas as pd

from src.nhtopo.core import TWO_Z, ZERO, Z, Z2, AbelianGroup, GroupHom, direct_sum, hom_is_unique, quotient_by_images
from src.nhtopo.errors import ContractViolation, MissingBlock, RelativeSignUndetermined
from src.nhtopo.symmetry import SymmetryClassId, catalog, class_from_indices, find_class, i_map
from src.nhtopo.utils import oracle_path, render_template

logger = logging.getLogger(__name__)

GAPS = ('P', 'Lr', 'Li')
FIELDS = ('K_P', 'K_Lr', 'K_Li', 'f_r', 'f_i', 'intrinsic')
DELTAS = range(8)

_PI0 = {
    'C': (Z, ZERO),
    'R': (Z, Z2, Z2, ZERO, TWO_Z, ZERO, ZERO, ZERO),
}

# families where the real and imaginary line gap generators have the same image in the point gap group
SAME_IMAGE = frozenset(('A+S', 'AI+S_+', 'AII+S_+', 'D+S_-', 'C+S_-'))
# families where they have opposite images
OPPOSITE_IMAGE = frozenset(('AIII+S_-,\\eta_-', 'BDI+S_{+-},\\eta_{-+}', 'CII+S_{+-},\\eta_{-+}',
                            'DIII+S_{+-},\\eta_{+-}', 'CI+S_{+-},\\eta_{+-}'))

DIFF_HEADER = (
    "AZ+U groups use the classifying spaces of (s-delta, t) for line gaps and (s+1-delta, t+1) for the point "
    "gap; the (s-1-delta, t-1) reading of the reduction does not reproduce the tables",
    "maps printed as n-m are stored as (n,m)->n+m, which spans the same image",
    "t=3 rows at classifying space R4 use 2Z and 2Z+2Z",
)


def pi0(space: str, s: int) -> AbelianGroup:
    """
    Zeroth homotopy group of the classifying space C_s or R_s.

    :param space: 'C' or 'R'
    :param s: index, reduced modulo 2 or 8
    :return: AbelianGroup
    """
    if space not in _PI0:
        raise ContractViolation(f"classifying space should be 'C' or 'R', got <{space}>")
    values = _PI0[space]
    return values[s % len(values)]


def _zero_dim_aztu(c: SymmetryClassId, s: int, t: int) -> AbelianGroup:
    if c.family == 'cAZU':
        if t % 2 == 0:
            return direct_sum(pi0('C', s), pi0('C', s))
        return pi0('C', s + 1)
    t = t % 4
    if t == 0:
        return direct_sum(pi0('R', s), pi0('R', s))
    if t == 1:
        return pi0('R', s - 1)
    if t == 2:
        return pi0('C', s)
    return pi0('R', s + 1)


def k_group(c, gap: str, delta: int) -> AbelianGroup:
    """
    Classification group of point gapped (P), real line gapped (Lr) or imaginary line gapped (Li)
    Hamiltonians of class c at dimension parameter delta.

    :param c: SymmetryClassId or class name
    :param gap: 'P', 'Lr' or 'Li'
    :param delta: dimension parameter
    :return: AbelianGroup
    """
    c = find_class(c)
    if gap not in GAPS:
        raise ContractViolation(f"gap should be one of {GAPS}, got <{gap}>")
    if gap == 'Li':
        return k_group(i_map(c), 'Lr', delta)

    shift = 1 if gap == 'P' else 0
    if c.family in ('cAZ', 'rAZ'):
        return pi0('C' if c.family == 'cAZ' else 'R', c.s + shift - delta)
    if c.family == 'rAZd':
        return pi0('R', c.s - shift - delta)
    return _zero_dim_aztu(c, c.s + shift - delta, c.t + shift)


class BlockSpec(NamedTuple):
    """A zero dimensional symmetry forgetting map that is not fixed by the groups alone."""
    index: int
    class_id: SymmetryClassId
    hom: GroupHom

    @property
    def domain(self) -> AbelianGroup:
        return self.hom.domain

    @property
    def codomain(self) -> AbelianGroup:
        return self.hom.codomain

    @property
    def title(self) -> str:
        return f"block {self.index} ({self.class_id.name}: {self.domain} → {self.codomain}, {self.hom.token()})"


_BLOCK_MATRICES = (
    (1, 'A+\\eta', [[1, 1]]),
    (2, 'AI', [[1]]),
    (3, 'D^\\dag', [[0]]),
    (4, 'BDI', [[1]]),
    (5, 'D+\\eta_+', [[1, 1]]),
    (6, 'D+\\eta_-', [[1]]),
    (7, 'C+\\eta_-', [[2]]),
    (8, 'AI+\\eta_+', [[1, 1]]),
    (9, 'AI+\\eta_-', [[1]]),
    (10, 'AII+\\eta_+', [[1, 1]]),
    (11, 'AIII+S_-,\\eta_-', [[1], [1]]),
    (12, 'AI+S_+', [[1], [1]]),
    (13, 'BDI+S_{++},\\eta_{++}', [[1, 1]]),
    (14, 'BDI+S_{-+},\\eta_{+-}', [[1]]),
    (15, 'BDI+S_{+-},\\eta_{-+}', [[1], [1]]),
    (16, 'DIII+S_{+-},\\eta_{+-}', [[1], [1]]),
    (17, 'CII+S_{-+},\\eta_{+-}', [[2]]),
    (18, 'CI+S_{+-},\\eta_{+-}', [[1], [1]]),
)


def _build_blocks() -> dict:
    blocks = {}
    for index, name, matrix in _BLOCK_MATRICES:
        c = find_class(name)
        hom = GroupHom(k_group(c, 'Lr', 0), k_group(c, 'P', 0), matrix)
        blocks[c.name] = BlockSpec(index, c, hom)
    return blocks


BLOCKS = _build_blocks()


def block_by_index(index: int) -> BlockSpec:
    for block in BLOCKS.values():
        if block.index == index:
            return block
    raise ContractViolation(f"no building block with index {index}")


def f_r(c, delta: int, blocks: dict | None = None) -> GroupHom:
    """
    Map forgetting the real line gap structure, K_Lr -> K_P.

    :param c: SymmetryClassId or class name
    :param delta: dimension parameter
    :param blocks: building blocks keyed by zero dimensional class name, defaults to BLOCKS
    :return: GroupHom
    """
    c = find_class(c)
    domain, codomain = k_group(c, 'Lr', delta), k_group(c, 'P', delta)
    if hom_is_unique(domain, codomain):
        return GroupHom.zero(domain, codomain)

    reduced = class_from_indices(c.family, c.s - delta, c.t)
    block = (BLOCKS if blocks is None else blocks).get(reduced.name)
    if block is None:
        raise MissingBlock(f"no building block for {reduced.name} ({domain.token()} -> {codomain.token()})")
    if block.domain != domain or block.codomain != codomain:
        raise MissingBlock(f"building block of {reduced.name} maps {block.domain.token()} -> "
                           f"{block.codomain.token()}, expected {domain.token()} -> {codomain.token()}")
    return GroupHom(domain, codomain, block.hom.matrix)


def f_i(c, delta: int, blocks: dict | None = None) -> GroupHom:
    """
    Map forgetting the imaginary line gap structure, K_Li -> K_P, derived from f_r of the class
    of iH; when the map doubles a single generator, its relative sign follows the family.

    :param c: SymmetryClassId or class name
    :param delta: dimension parameter
    :param blocks: building blocks keyed by zero dimensional class name, defaults to BLOCKS
    :return: GroupHom
    """
    c = find_class(c)
    rotated = f_r(i_map(c), delta, blocks)
    codomain = k_group(c, 'P', delta)
    if rotated.codomain != codomain:
        raise ContractViolation(f"point gap groups of {c.name} and its iH class differ at delta={delta}")
    matrix = np.array(rotated.matrix)

    if matrix.shape == (2, 1) and np.any(matrix):
        if c.name in OPPOSITE_IMAGE:
            matrix[1] = -matrix[1]
        elif c.name not in SAME_IMAGE:
            raise RelativeSignUndetermined(f"relative sign of the doubled image is not fixed for {c.name}")
    return GroupHom(rotated.domain, codomain, matrix)


def intrinsic(c, delta: int, blocks: dict | None = None) -> AbelianGroup:
    """
    Point gap phases with no line gap counterpart: K_P / (im f_r + im f_i).
    """
    c = find_class(c)
    return quotient_by_images(k_group(c, 'P', delta), [f_r(c, delta, blocks), f_i(c, delta, blocks)])


class TableRow(NamedTuple):
    class_id: SymmetryClassId
    delta: int
    K_P: AbelianGroup
    K_Lr: AbelianGroup
    K_Li: AbelianGroup
    f_r: GroupHom
    f_i: GroupHom
    intrinsic: AbelianGroup

    def tokens(self) -> dict:
        """
        :return: the oracle record of this row
        """
        record = {'class': self.class_id.name, 'delta': self.delta}
        for name in FIELDS:
            record[name] = getattr(self, name).token()
        return record


def compute_row(c, delta: int, blocks: dict | None = None) -> TableRow:
    c = find_class(c)
    forget_r, forget_i = f_r(c, delta, blocks), f_i(c, delta, blocks)
    point = k_group(c, 'P', delta)
    quotient = quotient_by_images(point, [forget_r, forget_i])
    return TableRow(c, delta, point, forget_r.domain, forget_i.domain, forget_r, forget_i, quotient)


@dataclass(frozen=True)
class TableSet:
    """All six table fields for a selection of classes and dimension parameters."""
    rows: tuple

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([row.tokens() for row in self.rows], columns=['class', 'delta'] + list(FIELDS))

    def select(self, c, delta: int) -> TableRow:
        c = find_class(c)
        for row in self.rows:
            if row.class_id == c and row.delta == delta:
                return row
        raise ContractViolation(f"no row for {c.name} at delta={delta}")

    def classes(self) -> list:
        return list(dict.fromkeys(row.class_id for row in self.rows))

    def is_periodic(self) -> bool:
        """Whether every field repeats with the Bott period of its class over the selected deltas."""
        fields = {(row.class_id, row.delta): [getattr(row, name) for name in FIELDS] for row in self.rows}
        for (c, delta), values in fields.items():
            shifted = fields.get((c, delta + c.period))
            if shifted is not None and shifted != values:
                return False
        return True

    def __len__(self) -> int:
        return len(self.rows)


class Mismatch(NamedTuple):
    class_name: str
    delta: int
    field: str
    expected: str
    found: str


@dataclass
class DiffReport:
    """Cell by cell comparison of generated tables against the oracle."""
    rows_compared: int = 0
    mismatches: list = field(default_factory=list)
    header: tuple = DIFF_HEADER

    @property
    def ok(self) -> bool:
        return not self.mismatches

    def lines(self) -> list:
        out = [f"# {line}" for line in self.header]
        out.append(f"# {self.rows_compared} rows compared, {len(self.mismatches)} mismatches")
        for m in self.mismatches:
            out.append(f"{m.class_name}\t{m.delta}\t{m.field}\texpected={m.expected}\tfound={m.found}")
        return out

    def to_dict(self) -> dict:
        return {'rows_compared': self.rows_compared, 'ok': self.ok,
                'mismatches': [m._asdict() for m in self.mismatches], 'header': list(self.header)}


def load_oracle(filepath: str | None = None) -> pd.DataFrame:
    """
    Read the tab separated transcription of the classification tables.

    :param filepath: explicit path, else NHTOPO_ORACLE, else the embedded data file
    :return: DataFrame with one record per (class, delta)
    """
    filepath = oracle_path(filepath)
    logger.info(f"⬇️ Reading oracle tables from <{filepath}> path")
    frame = pd.read_csv(filepath, sep='\t', dtype=str, keep_default_na=False)
    missing = {'class', 'delta', *FIELDS} - set(frame.columns)
    if missing:
        raise ContractViolation(f"oracle file misses columns {sorted(missing)}")
    frame['delta'] = frame['delta'].astype(int)
    return frame


def diff_tables(table: TableSet, oracle: pd.DataFrame) -> DiffReport:
    expected = {(r['class'], r['delta']): r for r in oracle.to_dict(orient='records')}
    report = DiffReport()
    for row in table.rows:
        record = row.tokens()
        report.rows_compared += 1
        reference = expected.get((record['class'], record['delta']))
        for name in FIELDS:
            wanted = '<missing>' if reference is None else reference[name]
            if wanted != record[name]:
                report.mismatches.append(Mismatch(record['class'], record['delta'], name, wanted, record[name]))
    return report


def generate_tables(families=None, classes=None, blocks: dict | None = None, oracle_file: str | None = None,
                    deltas=DELTAS) -> tuple:
    """
    Compute every table field for the selected classes and compare with the oracle.

    :param families: restrict to these families (e.g. ['cAZ']), None for all
    :param classes: restrict to these classes, None for all
    :param blocks: building blocks override, used for fault injection
    :param oracle_file: oracle path override
    :param deltas: dimension parameters
    :return: (TableSet, DiffReport)
    """
    wanted = None if classes is None else {find_class(c) for c in classes}
    selected = [c for c in catalog()
                if (families is None or c.family in families) and (wanted is None or c in wanted)]
    table = TableSet(tuple(compute_row(c, delta, blocks) for c in selected for delta in deltas))
    report = diff_tables(table, load_oracle(oracle_file))
    if report.ok:
        logger.info(f"📊 {len(table)} rows generated, no mismatch against the oracle")
    else:
        logger.warning(f"🔴 {len(report.mismatches)} mismatches against the oracle")
    return table, report


def periodicity_violations(classes=None) -> list:
    """
    :return: (class, delta, field) triples whose value differs one Bott period later
    """
    violations = []
    for c in (catalog() if classes is None else [find_class(c) for c in classes]):
        for delta in range(c.period):
            now, later = compute_row(c, delta).tokens(), compute_row(c, delta + c.period).tokens()
            violations.extend((c.name, delta, name) for name in FIELDS if now[name] != later[name])
    return violations


def render_tsv(table: TableSet) -> str:
    return table.to_frame().to_csv(sep='\t', index=False)


def render_json(table: TableSet) -> str:
    return json.dumps(table.to_frame().to_dict(orient='records'), ensure_ascii=False, indent=2)


def _cell(hom: GroupHom) -> str:
    text = f"{hom.domain} → {hom.codomain}"
    return text if hom.is_zero() else f"{text} ({hom.token()})"


def render_markdown(table: TableSet) -> str:
    """
    Two rows per class (real and imaginary line gap maps into the point gap group) followed by
    the intrinsic classification, as markdown tables.
    """
    deltas = sorted({row.delta for row in table.rows})
    entries = []
    for c in table.classes():
        rows = {row.delta: row for row in table.rows if row.class_id == c}
        entries.append({
            'name': c.name,
            'rotated': i_map(c).name,
            'real': [_cell(rows[d].f_r) if d in rows else '' for d in deltas],
            'imaginary': [_cell(rows[d].f_i) if d in rows else '' for d in deltas],
            'intrinsic': [str(rows[d].intrinsic) if d in rows else '' for d in deltas],
        })
    return render_template('tables.md', {'deltas': deltas, 'entries': entries})
