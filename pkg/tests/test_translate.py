import pytest

from grzlib import (
    P,
    atomic_cut_graph,
    ax_graph,
    box_step_graph,
    boxed_context_cut_graph,
    cut_above_loop_graph,
    graph,
    node,
    self_loop_graph,
    seq,
    weakening_part_cut_graph,
)
from nwproofs.calculus import check_proof_graph, compute_fragmentation
from nwproofs.coalgebra import UnfoldBudget, Unfolding, canonical_form, unfold
from nwproofs.grz import GRZ, GRZ_CUT, cut_elimination_step
from nwproofs.grz.rules import CUT
from nwproofs.translate import (
    CompatibilityViolation,
    StagedStep,
    StepContractViolation,
    TranslationStep,
    extend,
    extend_staged,
    identity_step,
    validate_step,
)
from nwproofs.trees import Truncation

BUDGET = UnfoldBudget(max_depth=4)


def cut_step_into_grz_cut():
    """The cut-removal step retargeted at the wider calculus, for staging."""
    base = cut_elimination_step()
    return TranslationStep(GRZ_CUT, GRZ_CUT, base.apply, name="cut-elim-wide")


def test_identity_extension_is_bisimilar():
    for pg in (ax_graph(), box_step_graph(), self_loop_graph()):
        out = extend(identity_step(GRZ), pg, BUDGET)
        assert not isinstance(out, Unfolding)
        assert canonical_form(out.graph, out.root) == canonical_form(pg.graph, pg.root)
        assert out.root_sequent == pg.root_sequent


def test_identity_without_memo_unfolds():
    pg = self_loop_graph()
    out = extend(identity_step(GRZ), pg, UnfoldBudget(max_depth=3), memo=False)
    assert isinstance(out, Unfolding)
    direct = unfold(pg.graph, pg.root, UnfoldBudget(max_depth=3))

    def strip(tree):
        return {
            w: (("trunc", lab.label) if isinstance(lab, Truncation) else lab)
            for w, lab in tree.labels().items()
        }

    assert strip(out.tree) == strip(direct.tree)
    assert out.tree.partition() == direct.tree.partition()


def test_extension_rejects_non_proof_input():
    bad = graph("s0", s0=node(seq([P], []), "ax"))
    with pytest.raises(ValueError):
        extend(identity_step(GRZ), bad, BUDGET)


def test_cut_elimination_step_extension_produces_grz_proof():
    for pg in (atomic_cut_graph(), weakening_part_cut_graph(), cut_above_loop_graph()):
        out = extend(cut_elimination_step(), pg, BUDGET)
        assert not isinstance(out, Unfolding)
        assert check_proof_graph(GRZ, out).ok
        assert out.root_sequent == pg.root_sequent


def test_extension_unfolding_projects_to_proof_tree():
    # composing with the recomputed fragmentation yields a checkable tree
    pg = boxed_context_cut_graph()
    out = extend(cut_elimination_step(), pg, UnfoldBudget(max_depth=3), memo=False)
    assert isinstance(out, Unfolding)
    computed = compute_fragmentation(GRZ, out.tree.labels())
    assert computed == out.tree.root_map()


def test_step_contract_violation_condition_two():
    base = identity_step(GRZ_CUT)

    def bad_apply(pg):
        frag, parts = base.apply(pg)
        return frag, {
            w: graph("b0", b0=node(seq([P], []), "box"))  # structurally labelled junk
            for w in parts
        }

    bad = TranslationStep(GRZ_CUT, GRZ_CUT, bad_apply, name="bad2")
    with pytest.raises(StepContractViolation) as err:
        extend(bad, box_step_graph(), BUDGET)
    assert err.value.condition == 2


def test_step_contract_violation_condition_one():
    base = identity_step(GRZ_CUT)

    def bad_apply(pg):
        frag, parts = base.apply(pg)
        relabeled = {
            w: ((lab[0], "refl") if lab[1] == "ax" else lab) if isinstance(lab, tuple) else lab
            for w, lab in frag.labels().items()
        }
        from nwproofs.trees import TreeNW

        return TreeNW(relabeled), parts

    bad = TranslationStep(GRZ_CUT, GRZ_CUT, bad_apply, name="bad1")
    with pytest.raises(StepContractViolation) as err:
        extend(bad, ax_graph(), BUDGET)
    assert err.value.condition == 1


def test_validate_step_identity_over_corpus():
    corpus = [ax_graph(), box_step_graph(), self_loop_graph()]
    report = validate_step(identity_step(GRZ), corpus)
    assert report.ok and report.checked == 3


def test_validate_step_cut_elimination_over_cut_corpus():
    corpus = [
        atomic_cut_graph(),
        weakening_part_cut_graph(),
        boxed_context_cut_graph(),
        cut_above_loop_graph(),
    ]
    report = validate_step(cut_elimination_step(), corpus)
    assert report.ok, [str(f) for f in report.findings]


def test_validate_step_reports_rule_relabeling():
    base = identity_step(GRZ)

    def bad_apply(pg):
        frag, parts = base.apply(pg)
        from nwproofs.trees import TreeNW

        relabeled = {
            w: ((lab[0], "bot") if isinstance(lab, tuple) and lab[1] == "ax" else lab)
            for w, lab in frag.labels().items()
        }
        return TreeNW(relabeled), parts

    report = validate_step(TranslationStep(GRZ, GRZ, bad_apply), [ax_graph()])
    assert not report.ok
    assert report.findings[0].condition == 1


def test_staged_never_switching_equals_plain():
    pg = self_loop_graph()
    staged = StagedStep(identity_step(GRZ), identity_step(GRZ), switch=lambda _: False)
    out = extend_staged(staged, pg, BUDGET)
    plain = extend(identity_step(GRZ), pg, BUDGET)
    assert canonical_form(out.graph, out.root) == canonical_form(plain.graph, plain.root)


def test_staged_immediate_switch_same_step_equals_plain():
    pg = self_loop_graph()
    staged = StagedStep(identity_step(GRZ), identity_step(GRZ), switch=lambda _: True)
    out = extend_staged(staged, pg, BUDGET)
    plain = extend(identity_step(GRZ), pg, BUDGET)
    assert canonical_form(out.graph, out.root) == canonical_form(plain.graph, plain.root)


def test_staged_one_fragment_delay_keeps_root_cuts_only():
    # identity first, cut removal after the first fragment: the root
    # fragment may keep its cut, everything behind it comes out clean
    pg = cut_above_loop_graph()
    staged = StagedStep(
        identity_step(GRZ_CUT), cut_step_into_grz_cut(), switch=lambda _: True
    )
    out = extend_staged(staged, pg, UnfoldBudget(max_depth=5))
    assert not isinstance(out, Unfolding)
    assert check_proof_graph(GRZ_CUT, out).ok
    from nwproofs.calculus import to_nested

    root_cuts = to_nested(out.fragment(out.root), out.links(out.root)).count(CUT)
    assert root_cuts == 1
    for s in out.states:
        if s != out.root:
            assert to_nested(out.fragment(s), out.links(s)).count(CUT) == 0


def test_staged_mismatched_calculi_rejected():
    with pytest.raises(ValueError):
        StagedStep(identity_step(GRZ), identity_step(GRZ_CUT), switch=lambda _: True)


def test_staged_compat_predicate_violation():
    pg = box_step_graph()
    staged = StagedStep(
        identity_step(GRZ),
        identity_step(GRZ),
        switch=lambda _: True,
        compat=lambda _: False,
    )
    with pytest.raises(CompatibilityViolation):
        extend_staged(staged, pg, BUDGET)
