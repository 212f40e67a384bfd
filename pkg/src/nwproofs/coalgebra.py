"""Finite coalgebras: states destructing to a fragment plus leaf links.

A coalgebra stores at each state a finite tree with star leaves and a
total map from those leaves back to states.  Regular infinite trees are
exactly what these machines generate; the infinite object itself only
ever exists through :func:`unfold`, which is depth- and size-budgeted.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Iterable, Mapping

from .fftree import FFTree
from .trees import (
    EPSILON,
    RootPath,
    TreeNW,
    Truncation,
    Word,
    format_word,
)

StateId = str
Destructor = tuple[TreeNW, Mapping[Word, StateId]]


class CoalgebraError(ValueError):
    pass


class UnknownState(CoalgebraError):
    pass


class NotARootPath(CoalgebraError):
    pass


class BudgetExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class UnfoldBudget:
    """Bounds for unfolding: layers of fragments, and total tree nodes."""

    max_depth: int
    max_nodes: int = 1_000_000

    def __post_init__(self) -> None:
        if self.max_depth < 1 or self.max_nodes < 1:
            raise ValueError("budget bounds must be at least 1")


class Coalgebra:
    """Immutable map from state ids to (fragment, links) destructors."""

    __slots__ = ("_dest",)

    def __init__(self, destructors: Mapping[StateId, Destructor]):
        dest: dict[StateId, tuple[TreeNW, dict[Word, StateId]]] = {}
        for state, (frag, links) in destructors.items():
            links = dict(links)
            if set(links) != set(frag.nw_leaves):
                raise CoalgebraError(
                    f"links of state {state!r} do not cover its star leaves exactly"
                )
            for w, target in links.items():
                if target not in destructors:
                    raise UnknownState(
                        f"state {state!r} links {format_word(w)} to unknown state {target!r}"
                    )
            dest[state] = (frag, links)
        self._dest = dest

    @property
    def states(self) -> frozenset[StateId]:
        return frozenset(self._dest)

    def fragment(self, state: StateId) -> TreeNW:
        self._check(state)
        return self._dest[state][0]

    def links(self, state: StateId) -> dict[Word, StateId]:
        self._check(state)
        return dict(self._dest[state][1])

    def destructors(self) -> dict[StateId, tuple[TreeNW, dict[Word, StateId]]]:
        return {s: (f, dict(l)) for s, (f, l) in self._dest.items()}

    def _check(self, state: StateId) -> None:
        if state not in self._dest:
            raise UnknownState(f"unknown state {state!r}")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Coalgebra) and self._dest == other._dest

    def __hash__(self):
        raise TypeError("use canonical_form for hashing coalgebras")

    def __repr__(self) -> str:
        return f"Coalgebra({sorted(self._dest)})"


def is_root_path(coalg: Coalgebra, state: StateId, path: RootPath) -> bool:
    """Does the sequence of leaf words trace through the machine?"""
    coalg._check(state)
    for w in path:
        frag, links = coalg._dest[state]
        if w not in frag.nw_leaves:
            return False
        state = links[w]
    return True


def subelement(coalg: Coalgebra, state: StateId, path: RootPath) -> StateId:
    """The state reached by following ``path`` from ``state``."""
    coalg._check(state)
    for w in path:
        frag, links = coalg._dest[state]
        if w not in frag.nw_leaves:
            raise NotARootPath(f"{format_word(w)} is not a star leaf of state {state!r}")
        state = links[w]
    return state


def fragment_at(coalg: Coalgebra, state: StateId, path: RootPath) -> TreeNW:
    return coalg.fragment(subelement(coalg, state, path))


@dataclass(frozen=True)
class Unfolding:
    """A depth-truncated unfolding plus where it was cut off."""

    tree: FFTree
    truncations: Mapping[Word, StateId]

    @property
    def complete_nodes(self) -> frozenset[Word]:
        return self.tree.nodes - frozenset(self.truncations)


def unfold(coalg: Coalgebra, state: StateId, budget: UnfoldBudget) -> Unfolding:
    """Lay out ``budget.max_depth`` layers of fragments as one tree.

    Layer k holds the fragments reachable by root paths of length k;
    beyond the last layer each pending glue point becomes a truncation
    leaf recording the state it would continue with.
    """
    coalg._check(state)
    labels: dict[Word, Any] = {}
    root_of: dict[Word, Word] = {}
    truncations: dict[Word, StateId] = {}
    frontier: list[tuple[Word, StateId]] = [(EPSILON, state)]
    for _ in range(budget.max_depth):
        next_frontier: list[tuple[Word, StateId]] = []
        for base, s in frontier:
            frag, links = coalg._dest[s]
            for u in frag.proper_nodes:
                labels[base + u] = frag.label(u)
                root_of[base + u] = base
            if len(labels) > budget.max_nodes:
                raise BudgetExceeded(f"unfolding exceeds {budget.max_nodes} nodes")
            for w in sorted(frag.nw_leaves):
                next_frontier.append((base + w, links[w]))
        frontier = next_frontier
    for base, s in frontier:
        labels[base] = Truncation(s, coalg.fragment(s).label(EPSILON))
        root_of[base] = base
        truncations[base] = s
        if len(labels) > budget.max_nodes:
            raise BudgetExceeded(f"unfolding exceeds {budget.max_nodes} nodes")
    return Unfolding(FFTree(labels, root_of, allow_truncation=True), truncations)


def reachable(coalg: Coalgebra, state: StateId) -> set[StateId]:
    coalg._check(state)
    seen = {state}
    stack = [state]
    while stack:
        s = stack.pop()
        for w in sorted(coalg._dest[s][1]):
            t = coalg._dest[s][1][w]
            if t not in seen:
                seen.add(t)
                stack.append(t)
    return seen


def restrict(coalg: Coalgebra, states: Iterable[StateId]) -> Coalgebra:
    keep = set(states)
    return Coalgebra({s: d for s, d in coalg.destructors().items() if s in keep})


def bisim_minimize(coalg: Coalgebra) -> tuple[Coalgebra, dict[StateId, StateId]]:
    """Quotient by the coarsest bisimulation.

    States are identified iff their fragments are equal and their links
    lead to pairwise identified states; the refinement is seeded by
    fragment equality.  Returns the quotient and the renaming map.
    """
    states = sorted(coalg.states)
    block: dict[StateId, int] = {}
    by_frag: dict[Any, int] = {}
    for s in states:
        key = coalg._dest[s][0].key
        block[s] = by_frag.setdefault(key, len(by_frag))
    while True:
        sigs: dict[tuple, int] = {}
        new_block: dict[StateId, int] = {}
        for s in states:
            frag, links = coalg._dest[s]
            sig = (block[s], tuple((w, block[links[w]]) for w in sorted(links)))
            new_block[s] = sigs.setdefault(sig, len(sigs))
        if new_block == block:
            break
        block = new_block
    members: dict[int, list[StateId]] = {}
    for s in states:
        members.setdefault(block[s], []).append(s)
    name = {b: min(ms) for b, ms in members.items()}
    renaming = {s: name[block[s]] for s in states}
    dest = {}
    for b, ms in members.items():
        rep = min(ms)
        frag, links = coalg._dest[rep]
        dest[name[b]] = (frag, {w: renaming[t] for w, t in links.items()})
    return Coalgebra(dest), renaming


def canonical_form(coalg: Coalgebra, state: StateId) -> tuple:
    """A hashable key equal for exactly the bisimilar rooted machines.

    Minimizes the part reachable from ``state`` and serializes it in
    a deterministic root-first order, so the key doubles as a memo key
    for corecursion and as an isomorphism test.
    """
    small, renaming = bisim_minimize(restrict(coalg, reachable(coalg, state)))
    order: dict[StateId, int] = {}
    queue = [renaming[state]]
    while queue:
        s = queue.pop(0)
        if s in order:
            continue
        order[s] = len(order)
        frag, links = small._dest[s]
        for w in sorted(links):
            if links[w] not in order:
                queue.append(links[w])
    table = sorted(order, key=order.get)
    return tuple(
        (small._dest[s][0].key, tuple((w, order[small._dest[s][1][w]]) for w in sorted(small._dest[s][1])))
        for s in table
    )
