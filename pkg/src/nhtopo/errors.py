#  Copyright © Roberto Chiosa 2024.
#  Email: roberto.chiosa@polito.it
#  Last edited: 17/10/2026


class NHTopoError(RuntimeError):
    """
    Base class of every contract violation raised by the toolkit.

    Subclasses carry a stable machine readable ``code`` that the command line
    interface reports on stderr.
    """
    code = 'contract_violation'

    def to_dict(self) -> dict:
        """
        :return: a json serializable description of the error
        """
        return {'error': self.code, 'message': str(self)}


class ContractViolation(NHTopoError):
    code = 'contract_violation'


class NotInCatalog(NHTopoError):
    code = 'not_in_catalog'


class UnknownId(NHTopoError):
    code = 'unknown_id'


class NoLineGap(NHTopoError):
    code = 'no_line_gap'


class NearDefective(NHTopoError):
    code = 'near_defective'


class GapClosedAlongPath(NHTopoError):
    code = 'gap_closed_along_path'


class SymmetryBroken(NHTopoError):
    code = 'symmetry_broken'


class NotInvertible(NHTopoError):
    code = 'not_invertible'


class Unquantized(NHTopoError):
    code = 'unquantized'


class ReferenceOnSpectrum(NHTopoError):
    code = 'reference_on_spectrum'


class NotHermitian(NHTopoError):
    code = 'not_hermitian'


class Gapless(NHTopoError):
    code = 'gapless'


class NotRealizable(NHTopoError):
    code = 'not_realizable'


class Singular(NHTopoError):
    code = 'singular'


class MissingBlock(NHTopoError):
    code = 'missing_block'


class RelativeSignUndetermined(NHTopoError):
    code = 'relative_sign_undetermined'
