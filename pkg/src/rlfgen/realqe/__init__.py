"""Real quantifier elimination: a small CAD, rational sampling and an external SMT adapter."""

from .api import BACKENDS, QeConfig, QeResult, WitnessResult, decide_closed, find_witness, qe
from .cad import Cad, NotDefinable
from .falsify import falsify_universal, witness_existential
from .smt import SOLVER_ENV, SmtAdapter
from .univariate import AlgebraicNumber

__all__ = ["BACKENDS", "QeConfig", "QeResult", "WitnessResult", "decide_closed", "find_witness",
           "qe", "Cad", "NotDefinable", "falsify_universal", "witness_existential", "SOLVER_ENV",
           "SmtAdapter", "AlgebraicNumber"]
