"""Corecursive extension of one-fragment proof translation steps.

A step consumes a proof of the source calculus and emits one output
fragment plus the residual source proofs hanging at its glue points.
Extending it corecursively yields the full translation: with
memoization, residuals are keyed by their canonical minimized form so
repeats become back links and regular inputs close into a finite
graph; otherwise (or when the key space blows past the state budget)
the output is a depth-budgeted unfolding with truncation marks.

Both conditions a step must satisfy are checked while extending: every
residual must pass the source checker, and every emitted fragment,
paired with the root sequents of its translated residuals, must pass
the target fragment check.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable, Hashable, Mapping

from .calculus import (
    CheckReport,
    LocalProgressCalculus,
    ProofGraph,
    check_proof_fragment,
    check_proof_graph,
)
from .coalgebra import (
    BudgetExceeded,
    Coalgebra,
    UnfoldBudget,
    Unfolding,
    canonical_form,
)
from .fftree import FFTree
from .trees import EPSILON, TreeNW, Truncation, Word, format_word

StepOutput = tuple[TreeNW, Mapping[Word, ProofGraph]]


@dataclass(frozen=True)
class TranslationStep:
    """One-fragment translation from proofs of ``source`` into ``target``."""

    source: LocalProgressCalculus
    target: LocalProgressCalculus
    apply: Callable[[ProofGraph], StepOutput]
    name: str = "step"


@dataclass(frozen=True)
class StagedStep:
    """Two steps with a switch: run ``first`` until the switch fires on a
    value, then run ``second`` on everything after it."""

    first: TranslationStep
    second: TranslationStep
    switch: Callable[[ProofGraph], bool]
    compat: Callable[[ProofGraph], bool] | None = None

    def __post_init__(self) -> None:
        if self.first.source is not self.second.source or self.first.target is not self.second.target:
            raise ValueError("staged steps must share source and target calculi")


class StepContractViolation(ValueError):
    """A translation step broke one of its two obligations."""

    def __init__(self, condition: int, message: str, report: CheckReport | None = None):
        super().__init__(f"condition {condition}: {message}")
        self.condition = condition
        self.report = report


class CompatibilityViolation(StepContractViolation):
    """The mixed fragment at a stage switch is not a target fragment."""


def identity_step(calc: LocalProgressCalculus) -> TranslationStep:
    """The destructor as a step: emit the root fragment, keep the rest."""

    def apply(pg: ProofGraph) -> StepOutput:
        fragment = pg.fragment(pg.root)
        links = pg.links(pg.root)
        return fragment, {
            w: ProofGraph(pg.graph, links[w]).pruned() for w in fragment.nw_leaves
        }

    return TranslationStep(calc, calc, apply, name="identity")


@dataclass
class _Emitted:
    fragment: TreeNW
    links: dict[Word, str] = field(default_factory=dict)
    switched: bool = False  # a stage boundary sits above its successors


class _Engine:
    """Shared worker for plain and staged extension.

    Values are (proof, stage) pairs; plain extension uses stage 0 only.
    """

    def __init__(self, staged: StagedStep | None, step: TranslationStep):
        self.staged = staged
        self.step = step
        self.source = step.source
        self.target = step.target

    def apply(self, value: tuple[ProofGraph, int]) -> tuple[TreeNW, dict[Word, tuple[ProofGraph, int]], bool]:
        pg, stage = value
        if self.staged is None:
            fragment, parts = self.step.apply(pg)
            return fragment, {w: (p, 0) for w, p in parts.items()}, False
        if stage == 0:
            fires = self.staged.switch(pg)
            if fires and self.staged.compat is not None and not self.staged.compat(pg):
                raise CompatibilityViolation(1, f"compatibility predicate rejected {pg!r}")
            fragment, parts = self.staged.first.apply(pg)
            nxt = 1 if fires else 0
            return fragment, {w: (p, nxt) for w, p in parts.items()}, fires
        fragment, parts = self.staged.second.apply(pg)
        return fragment, {w: (p, 1) for w, p in parts.items()}, False

    def key(self, value: tuple[ProofGraph, int]) -> Hashable:
        pg, stage = value
        return canonical_form(pg.graph, pg.root), stage

    def check_value(self, value: tuple[ProofGraph, int], where: str) -> None:
        report = check_proof_graph(self.source, value[0])
        if not report.ok:
            raise StepContractViolation(
                2, f"residual at {where} is not a {self.source.name} proof", report
            )

    def check_fragment(
        self,
        fragment: TreeNW,
        leaf_sequents: Mapping[Word, Any],
        where: str,
        switched: bool,
    ) -> None:
        report = check_proof_fragment(self.target, fragment, leaf_sequents)
        if report.ok:
            return
        cls = CompatibilityViolation if switched else StepContractViolation
        raise cls(1, f"fragment at {where} is not a {self.target.name} fragment", report)


def extend(
    step: TranslationStep,
    pg: ProofGraph,
    budget: UnfoldBudget,
    memo: bool = True,
    max_states: int = 512,
) -> ProofGraph | Unfolding:
    """Extend a step over a whole proof.

    Returns a closed :class:`ProofGraph` when memoization finds a finite
    set of residual keys within ``max_states``; otherwise a truncated
    :class:`Unfolding` of the translated proof, bounded by ``budget``.
    """
    _require_source_proof(step, pg)
    return _run(_Engine(None, step), (pg, 0), budget, memo, max_states)


def extend_staged(
    staged: StagedStep,
    pg: ProofGraph,
    budget: UnfoldBudget,
    memo: bool = True,
    max_states: int = 512,
) -> ProofGraph | Unfolding:
    """Extend a staged step, tracking the stage alongside each residual."""
    _require_source_proof(staged.first, pg)
    return _run(_Engine(staged, staged.first), (pg, 0), budget, memo, max_states)


def _require_source_proof(step: TranslationStep, pg: ProofGraph) -> None:
    report = check_proof_graph(step.source, pg)
    if not report.ok:
        raise ValueError(f"input is not a {step.source.name} proof:\n{report}")


def _run(engine, root_value, budget, memo, max_states):
    if memo:
        closed = _close(engine, root_value, max_states)
        if closed is not None:
            return closed
    return _unfold(engine, root_value, budget)


def _close(engine, root_value, max_states) -> ProofGraph | None:
    """Memoized corecursion to a finite graph; None if the key space is
    exhausted before closing."""
    memo: dict[Hashable, str] = {engine.key(root_value): "s0"}
    queue: list[tuple[tuple, str]] = [(root_value, "s0")]
    emitted: dict[str, _Emitted] = {}
    values: dict[str, tuple] = {"s0": root_value}
    while queue:
        value, sid = queue.pop(0)
        fragment, parts, switched = engine.apply(value)
        out = _Emitted(fragment, switched=switched)
        for w in sorted(fragment.nw_leaves):
            if w not in parts:
                raise StepContractViolation(2, f"no residual at leaf {format_word(w)}")
            succ = parts[w]
            key = engine.key(succ)
            if key not in memo:
                if len(memo) >= max_states:
                    return None
                name = f"s{len(memo)}"
                memo[key] = name
                values[name] = succ
                engine.check_value(succ, f"state {sid} leaf {format_word(w)}")
                queue.append((succ, name))
            out.links[w] = memo[key]
        emitted[sid] = out
    for sid, out in emitted.items():
        leaf_sequents = {
            w: emitted[t].fragment.label(EPSILON)[0] for w, t in out.links.items()
        }
        engine.check_fragment(out.fragment, leaf_sequents, f"state {sid}", out.switched)
    graph = Coalgebra({sid: (out.fragment, out.links) for sid, out in emitted.items()})
    return ProofGraph(graph, "s0")


def _unfold(engine, root_value, budget) -> Unfolding:
    """Layered translation without closure: truncate after ``max_depth``
    layers of output fragments, stepping the frontier once so truncation
    marks still carry the translated root labels."""
    labels: dict[Word, Any] = {}
    root_of: dict[Word, Word] = {}
    truncations: dict[Word, str] = {}
    fragments: dict[Word, tuple[TreeNW, dict[Word, Word], bool]] = {}
    frontier: list[tuple[Word, tuple]] = [(EPSILON, root_value)]
    counter = 0
    applied: dict[Word, tuple[TreeNW, dict[Word, tuple], bool]] = {}

    for _ in range(budget.max_depth):
        nxt: list[tuple[Word, tuple]] = []
        for base, value in frontier:
            fragment, parts, switched = engine.apply(value)
            applied[base] = (fragment, parts, switched)
            for u in fragment.proper_nodes:
                labels[base + u] = fragment.label(u)
                root_of[base + u] = base
            if len(labels) > budget.max_nodes:
                raise BudgetExceeded(f"translated unfolding exceeds {budget.max_nodes} nodes")
            for w in sorted(fragment.nw_leaves):
                if w not in parts:
                    raise StepContractViolation(2, f"no residual at leaf {format_word(w)}")
                engine.check_value(parts[w], f"position {format_word(base + w)}")
                nxt.append((base + w, parts[w]))
        frontier = nxt
    for base, value in frontier:
        fragment, _, _ = engine.apply(value)
        name = f"t{counter}"
        counter += 1
        labels[base] = Truncation(name, fragment.label(EPSILON))
        root_of[base] = base
        truncations[base] = name
        if len(labels) > budget.max_nodes:
            raise BudgetExceeded(f"translated unfolding exceeds {budget.max_nodes} nodes")
    for base, (fragment, parts, switched) in applied.items():
        leaf_sequents = {}
        for w in fragment.nw_leaves:
            child = labels[base + w]
            if isinstance(child, Truncation):
                leaf_sequents[w] = child.label[0]
            else:
                leaf_sequents[w] = child[0]
        engine.check_fragment(fragment, leaf_sequents, f"position {format_word(base)}", switched)
    return Unfolding(FFTree(labels, root_of, allow_truncation=True), truncations)


@dataclass(frozen=True)
class StepFinding:
    index: int
    condition: int
    message: str


@dataclass
class StepReport:
    checked: int = 0
    findings: list[StepFinding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings


def validate_step(step: TranslationStep, corpus: list[ProofGraph]) -> StepReport:
    """Check both step obligations for one application per corpus proof."""
    report = StepReport()
    for i, pg in enumerate(corpus):
        report.checked += 1
        pre = check_proof_graph(step.source, pg)
        if not pre.ok:
            report.findings.append(StepFinding(i, 0, "corpus member fails the source check"))
            continue
        fragment, parts = step.apply(pg)
        leaf_sequents: dict[Word, Any] = {}
        bad = False
        for w in sorted(fragment.nw_leaves):
            if w not in parts:
                report.findings.append(StepFinding(i, 2, f"no residual at {format_word(w)}"))
                bad = True
                continue
            sub = check_proof_graph(step.source, parts[w])
            if not sub.ok:
                report.findings.append(
                    StepFinding(i, 2, f"residual at {format_word(w)} fails the source check")
                )
                bad = True
                continue
            next_fragment, _ = step.apply(parts[w])
            leaf_sequents[w] = next_fragment.label(EPSILON)[0]
        if bad:
            continue
        frag_report = check_proof_fragment(step.target, fragment, leaf_sequents)
        if not frag_report.ok:
            report.findings.append(
                StepFinding(i, 1, f"fragment is not a {step.target.name} fragment: {frag_report}")
            )
    return report
