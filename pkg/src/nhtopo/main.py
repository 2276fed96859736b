#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026

import argparse
import datetime
import json
import logging
import os
import sys

from src.nhtopo.errors import ContractViolation, NHTopoError
from src.nhtopo.gaps import flatten, gap_report, spectrum_frame
from src.nhtopo.invariants import chern_2d, det_winding_point_gap, sign_det, signature_0d, winding_1d
from src.nhtopo.ktable import generate_tables, render_json, render_markdown, render_tsv
from src.nhtopo.modelfile import ModelFile
from src.nhtopo.models import catalog_ids, verify_block
from src.nhtopo.symmetry import SymmetrySpec, catalog, detect_class, i_map, orbit_representatives, verify_symmetry
from src.nhtopo.utils import GAP_TOL, UNITARY_TOL, ensure_dir, save_report

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_ERROR, EXIT_MISMATCH = 0, 1, 2
INVARIANT_KINDS = ('winding', 'detwinding', 'chern', 'signature', 'signdet')
# commands without a tolerance
EXACT_COMMANDS = ('classes', 'spectrum', 'table')


def _emit(payload) -> None:
    sys.stdout.write((payload if isinstance(payload, str) else json.dumps(payload, ensure_ascii=False, indent=2)))
    sys.stdout.write('\n')


def _complex(text: str) -> complex:
    try:
        re, im = (float(x) for x in text.split(','))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected <re,im>, got <{text}>")
    return complex(re, im)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog='nhtopo',
        description='Topological classification of non-Hermitian Hamiltonians: symmetry classes, '
                    'gaps, invariants and point gap versus line gap tables')
    parser.add_argument('--tol', help='Gap and residual tolerance, not accepted by classes, spectrum and table',
                        type=float, default=None)
    parser.add_argument('--verbose', help='Log progress to stderr', action='store_true')
    commands = parser.add_subparsers(dest='command', required=True)

    commands.add_parser('classes', help='List the 54 symmetry classes, * marks i-map orbit representatives')

    for name, text in (('classify', 'Detect the symmetry class of a model file'),
                       ('gaps', 'Point and line gap margins of a model file')):
        sub = commands.add_parser(name, help=text)
        sub.add_argument('model', help='Path to the model file', type=str)

    sub = commands.add_parser('invariant', help='Quantized invariant of a model file')
    sub.add_argument('model', help='Path to the model file', type=str)
    sub.add_argument('--kind', help='Invariant', choices=INVARIANT_KINDS, required=True)
    sub.add_argument('--eref', help='Reference energy re,im for detwinding', type=_complex, default=0j)

    sub = commands.add_parser('flatten', help='Spectral flattening of a line gapped model file')
    sub.add_argument('model', help='Path to the model file', type=str)
    sub.add_argument('--axis', help='Line gap axis', choices=('real', 'imag'), default='real')
    sub.add_argument('-o', '--output', help='Path of the flattened model file', type=str, required=True)

    sub = commands.add_parser('spectrum', help='Complex spectrum of a model file as CSV')
    sub.add_argument('model', help='Path to the model file', type=str)
    sub.add_argument('-o', '--output', help='Path of the CSV file, stdout if omitted', type=str, default=None)

    sub = commands.add_parser('table', help='Generate classification tables and diff them against the oracle')
    selection = sub.add_mutually_exclusive_group(required=True)
    selection.add_argument('--all', help='All classes and dimensions', action='store_true')
    selection.add_argument('--class', dest='class_name', help='Single class name', type=str)
    sub.add_argument('--delta', help='Dimension parameter, with --class', type=int, default=None)
    sub.add_argument('--format', help='Output format', choices=('tsv', 'json', 'md'), default='tsv')
    sub.add_argument('--oracle', help='Oracle file, overrides NHTOPO_ORACLE', type=str, default=None)
    sub.add_argument('-o', '--output', help='Write the table to a file instead of stdout', type=str, default=None)

    sub = commands.add_parser('verify-generators', help='Numerically verify the building block generators')
    sub.add_argument('--id', help='Block index, block class or exemplar id; all blocks if omitted', type=str,
                     default=None)
    return parser


def _classify(args, tol) -> int:
    model = ModelFile.load(args.model)
    H, spec = model.family(), model.spec()
    residuals = {op.kind.label: verify_symmetry(H, op) for op in spec}
    c = detect_class(spec)
    logger.info(f"📊 detected class {c.name}")
    _emit({'class': c.name, 'family': c.family, 'residuals': residuals,
           'symmetric': all(r < tol for r in residuals.values())})
    return EXIT_OK


def _invariant(args, tol) -> int:
    H = ModelFile.load(args.model).family()
    if args.kind == 'winding':
        value = winding_1d(H, tol)
    elif args.kind == 'detwinding':
        value = det_winding_point_gap(H, args.eref, tol)
    elif args.kind == 'chern':
        value = chern_2d(H, tol)
    elif args.kind == 'signature':
        value = signature_0d(H, tol)
    else:
        value = sign_det(H, tol=tol)
    logger.info(f"📊 {value.kind} = {value.value}")
    _emit(value.to_dict())
    return EXIT_OK


def _flatten(args, tol) -> int:
    model = ModelFile.load(args.model)
    H, spec = model.family(), model.spec()
    Q = flatten(H, args.axis, tol)
    # keep only the symmetries the flattened family still satisfies
    kept = [op for op in spec if verify_symmetry(Q, op) < tol]
    out = ModelFile.from_family(Q, SymmetrySpec(kept))
    out.save(args.output)
    return EXIT_OK


def _spectrum(args) -> int:
    frame = spectrum_frame(ModelFile.load(args.model).family())
    if args.output:
        ensure_dir(os.path.dirname(os.path.abspath(args.output)))
        frame.to_csv(args.output, index=False)
        logger.info(f"🎉 Spectrum written to {args.output}")
    else:
        _emit(frame.to_csv(index=False).rstrip('\n'))
    return EXIT_OK


def _table(args) -> int:
    if args.all:
        table, report = generate_tables(oracle_file=args.oracle)
    else:
        deltas = range(8) if args.delta is None else [args.delta]
        table, report = generate_tables(classes=[args.class_name], oracle_file=args.oracle, deltas=deltas)

    if args.format == 'json':
        content = render_json(table)
        if not args.all and args.delta is not None:
            record = json.loads(content)[0]
            record['matches_oracle'] = report.ok
            content = json.dumps(record, ensure_ascii=False, indent=2)
    elif args.format == 'md':
        content = render_markdown(table)
    else:
        content = render_tsv(table)

    if args.output:
        save_report(content, args.output)
    else:
        _emit(content.rstrip('\n'))

    if not report.ok:
        sys.stderr.write('\n'.join(report.lines()) + '\n')
        return EXIT_MISMATCH
    return EXIT_OK


def _verify_generators(args) -> int:
    ids = [args.id] if args.id else [i for i in catalog_ids() if i.isdigit()]
    tol = UNITARY_TOL if args.tol is None else args.tol
    reports = [verify_block(block_id, tol) for block_id in ids]
    _emit([report.to_dict() for report in reports])
    failed = [report for report in reports if not report.passed]
    for report in failed:
        for check in report.failures():
            sys.stderr.write(f"block {report.index} ({report.class_name}): {check.name} failed, {check.detail}\n")
    return EXIT_MISMATCH if failed else EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    # logs go to stderr so stdout stays machine readable
    logging.basicConfig(level=logging.INFO, format='%(asctime)s [%(levelname)s](%(name)s) %(message)s')
    logging.getLogger('src.nhtopo').setLevel(logging.INFO if args.verbose else logging.WARNING)
    logger.info(f"Arguments: {args}")

    ########################################################################################
    # define a begin time to evaluate execution time
    begin_time = datetime.datetime.now()
    tol = args.tol if args.tol is not None else GAP_TOL

    try:
        if args.tol is not None and args.command in EXACT_COMMANDS:
            raise ContractViolation(f"--tol does not apply to the {args.command} command")
        if args.command == 'classes':
            representatives = set(orbit_representatives())
            lines = ['class\tfamily\ts\tt\ti_map\trepresentative']
            for c in catalog():
                t = '' if c.t is None else str(c.t)
                lines.append(f"{c.name}\t{c.family}\t{c.s}\t{t}\t{i_map(c).name}\t{'*' if c in representatives else ''}")
            _emit('\n'.join(lines))
            code = EXIT_OK
        elif args.command == 'classify':
            code = _classify(args, tol)
        elif args.command == 'gaps':
            _emit(gap_report(ModelFile.load(args.model).family(), tol).to_dict())
            code = EXIT_OK
        elif args.command == 'invariant':
            code = _invariant(args, tol)
        elif args.command == 'flatten':
            code = _flatten(args, tol)
        elif args.command == 'spectrum':
            code = _spectrum(args)
        elif args.command == 'table':
            code = _table(args)
        else:
            code = _verify_generators(args)
    except NHTopoError as e:
        logger.error(f"🔴 {e.code}: {e}")
        sys.stderr.write(json.dumps(e.to_dict()) + '\n')
        return EXIT_ERROR

    ########################################################################################
    logger.info(f"Execution time: {datetime.datetime.now() - begin_time}")
    return code


if __name__ == '__main__':
    sys.exit(main())
