"""Pushing cuts out of the root fragment, and full cut elimination.

``reduce_cut`` removes one cut between two proofs whose root fragments
are cut free, by case analysis on their last rules; every recursive
call strictly decreases the (cut-formula rank, local-height sum) pair,
which is asserted at runtime.  ``cuts_up`` iterates it over the topmost
cuts of the root fragment, and ``cut_elim`` extends that one-fragment
move corecursively over the whole regular proof.
"""

from __future__ import annotations

from typing import Callable, NamedTuple

from ..calculus import (
    Arena,
    PLink,
    PNode,
    ProofGraph,
    replace_subtree,
    subtree_at,
    to_nested,
)
from ..coalgebra import UnfoldBudget, Unfolding
from ..trees import EPSILON, Word
from .admissible import (
    NotAProof,
    _require_proof,
    box_principal_body,
    contract_left_tree,
    contract_right_tree,
    drop_bot_tree,
    inv_box_right_tree,
    inv_imp_right_tree,
    linv_tree,
    rinv_tree,
    weaken_tree,
)
from .formulas import (
    Atom,
    Bot,
    Box,
    Formula,
    Imp,
    Sequent,
    mcount,
    mdiff,
    mset,
    munion,
    rank,
)
from .rules import (
    AX,
    BOT_LEFT,
    BOX,
    CUT,
    GRZ,
    GRZ_CUT,
    IMP_LEFT,
    IMP_RIGHT,
    REFL,
    imp_left_principal,
    imp_right_principal,
    is_axiom,
    is_bot_axiom,
    refl_principal,
)


class MeasureViolation(AssertionError):
    pass


class CutMeasure(NamedTuple):
    """Lexicographic (cut-formula rank, sum of the two local heights)."""

    rank: int
    height_sum: int


StepHook = Callable[[CutMeasure, "CutMeasure | None"], None]


def _measure(phi: Formula, pa: PNode, pb: PNode) -> CutMeasure:
    return CutMeasure(rank(phi), pa.height + pb.height)


def _derive_cut_formula(pa: Sequent, pb: Sequent) -> Formula:
    extra = mdiff(pa.succ, pb.succ)
    if len(extra) != 1 or extra[0][1] != 1:
        raise NotAProof("premises do not share a single cut formula")
    phi = extra[0][0]
    if pb != pa.drop_right(phi).with_left(phi):
        raise NotAProof("premise contexts do not match")
    return phi


def _imp_principal_of(node: PNode, rule: str) -> Imp | None:
    kids = [c.sequent for c in node.children if isinstance(c, PNode)]
    if rule == IMP_LEFT and len(kids) == 2:
        return imp_left_principal((kids[0], kids[1]), node.sequent)
    if rule == IMP_RIGHT and len(kids) == 1:
        return imp_right_principal((kids[0],), node.sequent)
    return None


def _reduce(
    arena: Arena,
    pa: PNode,
    pb: PNode,
    phi: Formula,
    bound: CutMeasure | None,
    on_step: StepHook | None,
) -> PNode:
    """A proof of the shared context, cut free in its root fragment.

    ``pa`` proves the context with ``phi`` on the right, ``pb`` with
    ``phi`` on the left; both root fragments are cut free.
    """
    measure = _measure(phi, pa, pb)
    if bound is not None and not measure < bound:
        raise MeasureViolation(f"cut measure {measure} did not drop below {bound}")
    if on_step is not None:
        on_step(measure, bound)
    ctx = pa.sequent.drop_right(phi)

    # Initial-sequent cases: the context itself may already be initial;
    # otherwise the initial side forces the cut formula to be atomic (or
    # bottom) and a contraction or bottom deletion on the other side wins.
    if is_axiom(ctx):
        return PNode(ctx, AX, ())
    if is_bot_axiom(ctx):
        return PNode(ctx, BOT_LEFT, ())
    if not pa.children:
        assert pa.rule == AX and isinstance(phi, Atom)
        return contract_left_tree(pb, phi)
    if not pb.children:
        if pb.rule == BOT_LEFT:
            assert phi == Bot()
            return drop_bot_tree(pa)
        assert pb.rule == AX and isinstance(phi, Atom)
        return contract_right_tree(pa, phi)

    assert pa.rule != CUT and pb.rule != CUT, "root fragments must be cut free"

    pa_principal = (
        (pa.rule == IMP_RIGHT and _imp_principal_of(pa, IMP_RIGHT) == phi)
        or (pa.rule == BOX and Box(box_principal_body(pa)) == phi)
    )
    pb_kids = [c.sequent for c in pb.children if isinstance(c, PNode)]
    pb_principal = (
        (pb.rule == IMP_LEFT and _imp_principal_of(pb, IMP_LEFT) == phi)
        or (pb.rule == REFL and refl_principal((pb_kids[0],), pb.sequent) == phi)
    )

    if pa_principal and pb_principal:
        return _principal_cut(arena, pa, pb, phi, measure, on_step)
    if not pa_principal:
        return _permute_left(arena, pa, pb, phi, measure, on_step)
    return _permute_right(arena, pa, pb, phi, measure, on_step)


def _principal_cut(arena, pa, pb, phi, measure, on_step) -> PNode:
    if isinstance(phi, Imp):
        # pa ends the right implication rule, pb the left one
        (a0,) = pa.children
        b0, b1 = pb.children
        assert isinstance(a0, PNode) and isinstance(b0, PNode) and isinstance(b1, PNode)
        half = _reduce(
            arena, a0, weaken_tree(b1, Sequent.of([phi.left], [])), phi.right, measure, on_step
        )
        return _reduce(arena, b0, half, phi.left, measure, on_step)
    assert isinstance(phi, Box)
    # pa ends the box rule on phi, pb the reflexivity rule on phi
    (b0,) = pb.children
    a0 = pa.children[0]
    assert isinstance(a0, PNode) and isinstance(b0, PNode)
    half = _reduce(
        arena, weaken_tree(pa, Sequent.of([phi.body], [])), b0, phi, measure, on_step
    )
    return _reduce(arena, a0, half, phi.body, measure, on_step)


def _permute_left(arena, pa, pb, phi, measure, on_step) -> PNode:
    """The cut formula is context in ``pa``: push the cut into its premises."""
    ctx = pa.sequent.drop_right(phi)
    if pa.rule == IMP_LEFT:
        imp = _imp_principal_of(pa, IMP_LEFT)
        a0, a1 = pa.children
        left = _reduce(arena, a0, linv_tree(pb, imp), phi, measure, on_step)
        right = _reduce(arena, a1, rinv_tree(pb, imp), phi, measure, on_step)
        return PNode(ctx, IMP_LEFT, (left, right))
    if pa.rule == IMP_RIGHT:
        imp = _imp_principal_of(pa, IMP_RIGHT)
        (a0,) = pa.children
        inner = _reduce(arena, a0, inv_imp_right_tree(pb, imp), phi, measure, on_step)
        return PNode(ctx, IMP_RIGHT, (inner,))
    if pa.rule == REFL:
        boxed = refl_principal((pa.children[0].sequent,), pa.sequent)
        (a0,) = pa.children
        inner = _reduce(
            arena, a0, weaken_tree(pb, Sequent.of([boxed.body], [])), phi, measure, on_step
        )
        return PNode(ctx, REFL, (inner,))
    assert pa.rule == BOX, f"unexpected rule {pa.rule} while permuting"
    # the cut formula sits in the weakening part of pa's box
    body = box_principal_body(pa)
    a0, a_link = pa.children
    assert isinstance(a0, PNode) and isinstance(a_link, PLink)
    inverted = inv_box_right_tree(pb, Box(body))
    inner = _reduce(arena, a0, inverted, phi, measure, on_step)
    return PNode(ctx, BOX, (inner, a_link))


def _permute_right(arena, pa, pb, phi, measure, on_step) -> PNode:
    """The cut formula is context in ``pb``; ``pa`` is principal on it."""
    ctx = pa.sequent.drop_right(phi)
    if pb.rule == IMP_LEFT:
        imp = _imp_principal_of(pb, IMP_LEFT)
        b0, b1 = pb.children
        left = _reduce(arena, linv_tree(pa, imp), b0, phi, measure, on_step)
        right = _reduce(arena, rinv_tree(pa, imp), b1, phi, measure, on_step)
        return PNode(ctx, IMP_LEFT, (left, right))
    if pb.rule == IMP_RIGHT:
        imp = _imp_principal_of(pb, IMP_RIGHT)
        (b0,) = pb.children
        inner = _reduce(arena, inv_imp_right_tree(pa, imp), b0, phi, measure, on_step)
        return PNode(ctx, IMP_RIGHT, (inner,))
    if pb.rule == REFL:
        boxed = refl_principal((pb.children[0].sequent,), pb.sequent)
        (b0,) = pb.children
        inner = _reduce(
            arena, weaken_tree(pa, Sequent.of([boxed.body], [])), b0, phi, measure, on_step
        )
        return PNode(ctx, REFL, (inner,))
    assert pb.rule == BOX, f"unexpected rule {pb.rule} while permuting"
    psi = box_principal_body(pb)
    b0, b_link = pb.children
    assert isinstance(b0, PNode) and isinstance(b_link, PLink)
    right_seq = _state_sequent(arena, b_link.target)
    in_weakening = mcount(pb.sequent.ante, phi) > mcount(right_seq.ante, phi)
    if in_weakening:
        inverted = inv_box_right_tree(pa, Box(psi))
        inner = _reduce(arena, inverted, b0, phi, measure, on_step)
        return PNode(ctx, BOX, (inner, b_link))
    # Hard case: the cut formula is one of the boxed hypotheses carried
    # by pb's box.  Both sides end a box; a residual cut on the same
    # formula is assembled behind the progress edge, outside the root
    # fragment, where it will be dealt with on a later corecursion step.
    assert pa.rule == BOX and Box(box_principal_body(pa)) == phi
    a0, a_link = pa.children
    assert isinstance(a0, PNode) and isinstance(a_link, PLink)
    boxes_a = _state_sequent(arena, a_link.target).ante          # boxed context of pa
    boxes_b = mdiff(right_seq.ante, mset([phi]))                 # pb's boxes minus the cut formula
    only_b = mdiff(boxes_b, boxes_a)
    only_a = mdiff(boxes_a, boxes_b)
    inverted = inv_box_right_tree(pa, Box(psi))
    main = _reduce(arena, inverted, b0, phi, measure, on_step)

    pa1 = arena.materialize(a_link.target)
    pb1 = arena.materialize(b_link.target)
    shared = munion(boxes_a, only_b)
    inner_left = weaken_tree(pa1, Sequent(only_b, mset([psi])))
    inner_box = PNode(
        Sequent(shared, mset([psi, phi])),
        BOX,
        (inner_left, PLink(a_link.target)),
    )
    residual_right = weaken_tree(pb1, Sequent(only_a, ()))
    residual = PNode(Sequent(shared, mset([psi])), CUT, (inner_box, residual_right))
    return PNode(ctx, BOX, (main, PLink(arena.intern(residual))))


def _state_sequent(arena: Arena, state: str) -> Sequent:
    return arena.state_fragment(state).label(EPSILON)[0]


def reduce_cut(
    left: ProofGraph, right: ProofGraph, on_step: StepHook | None = None
) -> ProofGraph:
    """Cut two proofs of a shared context against each other.

    ``left`` proves the context extended with the cut formula on the
    right, ``right`` with it on the left; neither may have a cut in its
    root fragment.  The result proves the bare context, again with a
    cut-free root fragment.
    """
    _require_proof(left)
    _require_proof(right)
    for pg, name in ((left, "left"), (right, "right")):
        if to_nested(pg.fragment(pg.root), pg.links(pg.root)).count(CUT):
            raise NotAProof(f"{name} premise has a cut in its root fragment")
    phi = _derive_cut_formula(left.root_sequent, right.root_sequent)
    arena = Arena()
    la = arena.include(left)
    lb = arena.include(right)
    out = _reduce(arena, arena.materialize(la), arena.materialize(lb), phi, None, on_step)
    return arena.proof(out)


def _cut_positions(node: PNode) -> list[Word]:
    out: list[Word] = []

    def walk(n: PNode, at: Word) -> None:
        if n.rule == CUT:
            out.append(at)
        for i, c in enumerate(n.children):
            if isinstance(c, PNode):
                walk(c, at + (i,))

    walk(node, EPSILON)
    return out


def cuts_up(pg: ProofGraph, on_step: StepHook | None = None) -> ProofGraph:
    """Remove every cut from the root fragment, one topmost cut per round.

    Among the cuts with no cut above them the one at the least node word
    is reduced first; the cut count of the root fragment drops by at
    least one per round, so this terminates.
    """
    _require_proof(pg)
    arena = Arena()
    root = arena.include(pg)
    nested = arena.materialize(root)
    while True:
        cuts = _cut_positions(nested)
        if not cuts:
            break
        topmost = [
            w
            for w in cuts
            if not any(u != w and u[: len(w)] == w for u in cuts)
        ]
        at = min(topmost)
        node = subtree_at(nested, at)
        assert isinstance(node, PNode)
        pa, pb = node.children
        assert isinstance(pa, PNode) and isinstance(pb, PNode)
        phi = _derive_cut_formula(pa.sequent, pb.sequent)
        reduced = _reduce(arena, pa, pb, phi, None, on_step)
        replaced = replace_subtree(nested, at, reduced)
        assert isinstance(replaced, PNode)
        assert replaced.count(CUT) < nested.count(CUT), "cut count must drop"
        nested = replaced
    return arena.proof(nested)


def cut_elimination_step():
    """One corecursion step: clear the root fragment, hand back the rest."""
    from ..translate import TranslationStep

    def apply(pg: ProofGraph):
        clean = cuts_up(pg)
        fragment = clean.fragment(clean.root)
        links = clean.links(clean.root)
        parts = {
            w: ProofGraph(clean.graph, links[w]).pruned() for w in fragment.nw_leaves
        }
        return fragment, parts

    return TranslationStep(GRZ_CUT, GRZ, apply, name="cut-elim")


def cut_elim(
    pg: ProofGraph,
    budget: UnfoldBudget | None = None,
    memo: bool = True,
    max_states: int = 256,
) -> ProofGraph | Unfolding:
    """Translate a proof with cuts into a cut-free one.

    With memoization on, equal residual proofs are detected through
    their canonical minimized form and become back links, so regular
    inputs usually close into a finite cut-free graph; otherwise the
    result is a budgeted unfolding whose complete fragments are all
    cut free and checker valid.
    """
    from ..translate import extend

    if budget is None:
        budget = UnfoldBudget(max_depth=6, max_nodes=200_000)
    return extend(cut_elimination_step(), pg, budget, memo=memo, max_states=max_states)
