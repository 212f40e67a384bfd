"""Admissible transformations of proofs: weakening, atomic contraction,
and the inversions of the logical rules.

Each one rewrites only the root state's fragment, by recursion on its
height: in every rule the surrounding context passes through unchanged,
and the right premise of a box node is a link whose subproof is reused
as is.  All of them keep the local height from growing and never insert
a cut, so a cut-free root fragment stays cut-free.
"""

from __future__ import annotations

from typing import Callable

from ..calculus import Arena, CheckReport, PNode, ProofGraph, check_proof_graph, to_nested
from .formulas import Atom, Bot, Box, Formula, Imp, Sequent, mdiff
from .rules import (
    BOX,
    GRZ_CUT,
    IMP_LEFT,
    IMP_RIGHT,
    imp_left_principal,
    imp_right_principal,
)


class NotAProof(ValueError):
    def __init__(self, message: str, report: CheckReport | None = None):
        super().__init__(message)
        self.report = report


class FormulaAbsent(ValueError):
    pass


def _require_proof(pg: ProofGraph) -> None:
    report = check_proof_graph(GRZ_CUT, pg)
    if not report.ok:
        raise NotAProof(f"input fails the proof check:\n{report}", report)


def _rebuild(pg: ProofGraph, node: PNode) -> ProofGraph:
    arena = Arena()
    arena.include(pg)
    return arena.proof(node)


def _root_nested(pg: ProofGraph) -> PNode:
    return to_nested(pg.fragment(pg.root), pg.links(pg.root))


def box_principal_body(node: PNode) -> Formula:
    """Principal body of a box node, read off conclusion and left premise."""
    left = node.children[0]
    assert isinstance(left, PNode)
    extra = mdiff(left.sequent.succ, node.sequent.succ)
    assert len(extra) == 1 and extra[0][1] == 1
    return extra[0][0]


# -- uniform context edits ---------------------------------------------


def _edit(node: PNode, fn: Callable[[Sequent], Sequent]) -> PNode:
    kids = tuple(
        _edit(c, fn) if isinstance(c, PNode) else c for c in node.children
    )
    return PNode(fn(node.sequent), node.rule, kids)


def weakening(pg: ProofGraph, extra: Sequent) -> ProofGraph:
    """Add ``extra`` to every sequent of the root fragment.

    At a box node the addition lands in the weakening part, so the right
    link is reused unchanged.
    """
    _require_proof(pg)
    return _rebuild(pg, weaken_tree(_root_nested(pg), extra))


def weaken_tree(node: PNode, extra: Sequent) -> PNode:
    if extra == Sequent():
        return node
    return _edit(node, lambda s: s.union(extra))


def contr_atom_left(pg: ProofGraph, p: Formula) -> ProofGraph:
    """Merge two antecedent copies of the atom ``p`` into one."""
    if not isinstance(p, Atom):
        raise FormulaAbsent(f"contraction wants an atom, got {p!r}")
    _require_proof(pg)
    if pg.root_sequent.left_count(p) < 2:
        raise FormulaAbsent(f"{p!r} does not occur twice on the left")
    return _rebuild(pg, contract_left_tree(_root_nested(pg), p))


def contract_left_tree(node: PNode, p: Formula) -> PNode:
    return _edit(node, lambda s: s.drop_left(p))


def contr_atom_right(pg: ProofGraph, p: Formula) -> ProofGraph:
    if not isinstance(p, Atom):
        raise FormulaAbsent(f"contraction wants an atom, got {p!r}")
    _require_proof(pg)
    if pg.root_sequent.right_count(p) < 2:
        raise FormulaAbsent(f"{p!r} does not occur twice on the right")
    return _rebuild(pg, contract_right_tree(_root_nested(pg), p))


def contract_right_tree(node: PNode, p: Formula) -> PNode:
    return _edit(node, lambda s: s.drop_right(p))


def inv_bot_right(pg: ProofGraph) -> ProofGraph:
    """Delete one succedent bottom everywhere in the root fragment."""
    _require_proof(pg)
    if pg.root_sequent.right_count(Bot()) < 1:
        raise FormulaAbsent("no bottom on the right")
    return _rebuild(pg, drop_bot_tree(_root_nested(pg)))


def drop_bot_tree(node: PNode) -> PNode:
    return _edit(node, lambda s: s.drop_right(Bot()))


# -- inversions with a principal short-circuit --------------------------
#
# When the rewrite reaches a node whose principal formula is the one
# being inverted, the wanted proof is one of its premises; otherwise the
# occurrence is context and the edit recurses.


def _invert(
    node: PNode,
    hit: Callable[[PNode], PNode | None],
    edit: Callable[[Sequent], Sequent],
) -> PNode:
    taken = hit(node)
    if taken is not None:
        return taken
    kids = tuple(
        _invert(c, hit, edit) if isinstance(c, PNode) else c for c in node.children
    )
    return PNode(edit(node.sequent), node.rule, kids)


def linv_imp_left(pg: ProofGraph, imp: Formula) -> ProofGraph:
    """From a proof of S with ``imp`` on the left, a proof of S plus the
    implication's antecedent on the right."""
    _require_proof(pg)
    return _rebuild(pg, linv_tree(_root_nested(pg), _as_imp(pg, imp, left=True)))


def rinv_imp_left(pg: ProofGraph, imp: Formula) -> ProofGraph:
    _require_proof(pg)
    return _rebuild(pg, rinv_tree(_root_nested(pg), _as_imp(pg, imp, left=True)))


def inv_imp_right(pg: ProofGraph, imp: Formula) -> ProofGraph:
    _require_proof(pg)
    return _rebuild(pg, inv_imp_right_tree(_root_nested(pg), _as_imp(pg, imp, left=False)))


def inv_box_right(pg: ProofGraph, boxed: Formula) -> ProofGraph:
    """From a proof of S with a boxed formula on the right, a proof with
    its body instead; the principal case returns the left premise."""
    _require_proof(pg)
    if not isinstance(boxed, Box):
        raise FormulaAbsent(f"expected a boxed formula, got {boxed!r}")
    if pg.root_sequent.right_count(boxed) < 1:
        raise FormulaAbsent(f"{boxed!r} does not occur on the right")
    return _rebuild(pg, inv_box_right_tree(_root_nested(pg), boxed))


def _as_imp(pg: ProofGraph, imp: Formula, left: bool) -> Imp:
    if not isinstance(imp, Imp):
        raise FormulaAbsent(f"expected an implication, got {imp!r}")
    count = pg.root_sequent.left_count(imp) if left else pg.root_sequent.right_count(imp)
    if count < 1:
        side = "left" if left else "right"
        raise FormulaAbsent(f"{imp!r} does not occur on the {side}")
    return imp


def linv_tree(node: PNode, imp: Imp) -> PNode:
    def hit(n: PNode) -> PNode | None:
        if n.rule == IMP_LEFT:
            c0, c1 = n.children
            assert isinstance(c0, PNode) and isinstance(c1, PNode)
            if imp_left_principal((c0.sequent, c1.sequent), n.sequent) == imp:
                return c0
        return None

    return _invert(node, hit, lambda s: s.drop_left(imp).with_right(imp.left))


def rinv_tree(node: PNode, imp: Imp) -> PNode:
    def hit(n: PNode) -> PNode | None:
        if n.rule == IMP_LEFT:
            c0, c1 = n.children
            assert isinstance(c0, PNode) and isinstance(c1, PNode)
            if imp_left_principal((c0.sequent, c1.sequent), n.sequent) == imp:
                return c1
        return None

    return _invert(node, hit, lambda s: s.drop_left(imp).with_left(imp.right))


def inv_imp_right_tree(node: PNode, imp: Imp) -> PNode:
    def hit(n: PNode) -> PNode | None:
        if n.rule == IMP_RIGHT:
            (c0,) = n.children
            assert isinstance(c0, PNode)
            if imp_right_principal((c0.sequent,), n.sequent) == imp:
                return c0
        return None

    return _invert(
        node, hit, lambda s: s.drop_right(imp).with_left(imp.left).with_right(imp.right)
    )


def inv_box_right_tree(node: PNode, boxed: Box) -> PNode:
    def hit(n: PNode) -> PNode | None:
        if n.rule == BOX and Box(box_principal_body(n)) == boxed:
            c0 = n.children[0]
            assert isinstance(c0, PNode)
            return c0
        return None

    return _invert(node, hit, lambda s: s.drop_right(boxed).with_right(boxed.body))
