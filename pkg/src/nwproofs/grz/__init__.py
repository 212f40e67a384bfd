"""Grzegorczyk modal logic: formulas, sequent rules, admissible moves,
and cut elimination over regular non-wellfounded proofs."""

from .formulas import Atom, Bot, Box, Formula, Imp, Sequent, rank
from .rules import GRZ, GRZ_CUT, local_height
from .admissible import (
    FormulaAbsent,
    NotAProof,
    contr_atom_left,
    contr_atom_right,
    inv_bot_right,
    inv_box_right,
    inv_imp_right,
    linv_imp_left,
    rinv_imp_left,
    weakening,
)
from .cutelim import (
    CutMeasure,
    MeasureViolation,
    cut_elim,
    cut_elimination_step,
    cuts_up,
    reduce_cut,
)

__all__ = [
    "Atom",
    "Bot",
    "Box",
    "Formula",
    "Imp",
    "Sequent",
    "rank",
    "GRZ",
    "GRZ_CUT",
    "local_height",
    "FormulaAbsent",
    "NotAProof",
    "weakening",
    "contr_atom_left",
    "contr_atom_right",
    "inv_bot_right",
    "linv_imp_left",
    "rinv_imp_left",
    "inv_imp_right",
    "inv_box_right",
    "CutMeasure",
    "MeasureViolation",
    "reduce_cut",
    "cuts_up",
    "cut_elim",
    "cut_elimination_step",
]
