"""The proof-graph file format and the DOT rendering.

A file names its calculus and root state and lists one block per state;
inside a block the fragment is written as an indented tree of
``sequent : rule`` lines, with ``link NAME`` leaves for glue points.
Printing orders states by first use in a root-first traversal and
formulas canonically, so printed files are diff-stable and re-printing
a parsed file reproduces it byte for byte.
"""

from __future__ import annotations

from .calculus import PLink, PNode, ProofGraph, flatten, to_nested
from .coalgebra import Coalgebra
from .grz.rules import CALCULI
from .syntax import ParseError, parse_sequent, print_sequent
from .trees import EPSILON, format_word

INDENT = "  "


class GraphFileError(ValueError):
    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


def print_proof_file(pg: ProofGraph, calculus_name: str) -> str:
    if calculus_name not in CALCULI:
        raise GraphFileError(f"unknown calculus {calculus_name!r}")
    lines = [f"calculus {calculus_name}", f"root {pg.root}", ""]
    for state in _first_use_order(pg):
        lines.append(f"state {state}")
        nested = to_nested(pg.fragment(state), pg.links(state))
        _print_node(nested, 1, lines)
        lines.append("")
    return "\n".join(lines).rstrip("\n") + "\n"


def _first_use_order(pg: ProofGraph) -> list[str]:
    order: list[str] = []
    seen = set()
    queue = [pg.root]
    while queue:
        s = queue.pop(0)
        if s in seen:
            continue
        seen.add(s)
        order.append(s)
        links = pg.links(s)
        for w in sorted(links):
            queue.append(links[w])
    # unreachable states still serialize, after the reachable ones
    order.extend(sorted(pg.states - seen))
    return order


def _print_node(node: PNode | PLink, depth: int, lines: list[str]) -> None:
    pad = INDENT * depth
    if isinstance(node, PLink):
        lines.append(f"{pad}link {node.target}")
        return
    lines.append(f"{pad}{print_sequent(node.sequent)} : {node.rule}")
    for child in node.children:
        _print_node(child, depth + 1, lines)


def parse_proof_file(text: str) -> tuple[str, ProofGraph]:
    calculus_name: str | None = None
    root: str | None = None
    states: dict[str, PNode] = {}
    current: str | None = None
    top_node = None
    stack: list[tuple[int, object]] = []

    def close_state(line_no: int) -> None:
        nonlocal current, top_node
        if current is None:
            return
        if top_node is None:
            raise GraphFileError(f"state {current} has no fragment", line_no)
        if not isinstance(top_node, _MutableNode):
            raise GraphFileError(f"state {current} is just a link", line_no)
        states[current] = _freeze(top_node)
        stack.clear()
        top_node = None
        current = None

    for line_no, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        indent = len(raw) - len(raw.lstrip(" "))
        if indent % len(INDENT):
            raise GraphFileError("odd indentation", line_no)
        depth = indent // len(INDENT)
        body = raw.strip()
        if depth == 0:
            parts = body.split()
            if parts[0] == "calculus" and len(parts) == 2:
                calculus_name = parts[1]
            elif parts[0] == "root" and len(parts) == 2:
                root = parts[1]
            elif parts[0] == "state" and len(parts) == 2:
                close_state(line_no)
                current = parts[1]
                if current in states:
                    raise GraphFileError(f"duplicate state {current}", line_no)
            else:
                raise GraphFileError(f"unrecognized line {body!r}", line_no)
            continue
        if current is None:
            raise GraphFileError("fragment line outside a state block", line_no)
        node = _parse_node_line(body, line_no)
        while stack and stack[-1][0] >= depth:
            stack.pop()
        if depth == 1:
            if top_node is not None:
                raise GraphFileError("a state block may hold only one tree", line_no)
            top_node = node
            stack.append((depth, node))
        else:
            if not stack or stack[-1][0] != depth - 1:
                raise GraphFileError("child without a parent at the right depth", line_no)
            parent = stack[-1][1]
            if not isinstance(parent, _MutableNode):
                raise GraphFileError("links cannot have children", line_no)
            parent.children = parent.children + (node,)
            stack.append((depth, node))
    close_state(len(text.splitlines()))

    if calculus_name is None:
        raise GraphFileError("missing calculus header")
    if calculus_name not in CALCULI:
        raise GraphFileError(f"unknown calculus {calculus_name!r}")
    if root is None:
        raise GraphFileError("missing root header")
    if root not in states:
        raise GraphFileError(f"root {root} has no state block")
    dest = {}
    for name, nested in states.items():
        frag, links = flatten(nested)
        for target in links.values():
            if target not in states:
                raise GraphFileError(f"state {name} links to unknown state {target}")
        dest[name] = (frag, links)
    return calculus_name, ProofGraph(Coalgebra(dest), root)


class _MutableNode:
    """Parse-time node; frozen into PNode once its children are known."""

    __slots__ = ("sequent", "rule", "children")

    def __init__(self, sequent, rule):
        self.sequent = sequent
        self.rule = rule
        self.children = ()


def _parse_node_line(body: str, line_no: int):
    if body.startswith("link "):
        target = body[len("link ") :].strip()
        if not target or " " in target:
            raise GraphFileError("malformed link line", line_no)
        return PLink(target)
    if " : " not in body:
        raise GraphFileError("expected 'sequent : rule'", line_no)
    seq_text, rule = body.rsplit(" : ", 1)
    rule = rule.strip()
    if not rule:
        raise GraphFileError("missing rule name", line_no)
    try:
        sequent = parse_sequent(seq_text)
    except ParseError as err:
        raise GraphFileError(f"bad sequent: {err}", line_no) from None
    node = _MutableNode(sequent, rule)
    return node


def _freeze(node) -> PNode:
    if isinstance(node, PLink):
        return node
    return PNode(node.sequent, node.rule, tuple(_freeze(c) for c in node.children))


def canonicalize(text: str) -> str:
    name, pg = parse_proof_file(text)
    return print_proof_file(pg, name)


def to_dot(pg: ProofGraph) -> str:
    """Graphviz rendering: one cluster per state, link edges dashed."""
    lines = ["digraph proof {", '  node [shape=box, fontname="monospace"];']
    links: list[tuple[str, str]] = []
    for state in _first_use_order(pg):
        frag = pg.fragment(state)
        state_links = pg.links(state)
        lines.append(f'  subgraph "cluster_{state}" {{')
        lines.append(f'    label="{state}";')
        for w in sorted(frag.nodes):
            node_id = f"{state}/{format_word(w)}"
            if w in frag.nw_leaves:
                links.append((node_id, f"{state_links[w]}/{format_word(EPSILON)}"))
                lines.append(f'    "{node_id}" [label="*", shape=circle];')
            else:
                sequent, rule = frag.label(w)
                text = f"{print_sequent(sequent)}\\n{rule}"
                lines.append(f'    "{node_id}" [label="{text}"];')
        for w in sorted(frag.nodes):
            if w == EPSILON:
                continue
            lines.append(
                f'    "{state}/{format_word(w[:-1])}" -> "{state}/{format_word(w)}";'
            )
        lines.append("  }")
    for src, dst in links:
        lines.append(f'  "{src}" -> "{dst}" [style=dashed];')
    lines.append("}")
    return "\n".join(lines) + "\n"
