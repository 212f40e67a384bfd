"""Labelled trees carrying a partition into finite, rooted, convex blocks.

Each block of the partition is one finite piece of a (conceptually
infinite) tree; block roots mark where one piece ends and the next one
starts.  The pair (piece at the root, subtree per glue point) is a
destructor, and ``construct`` is its inverse, so these trees are the
concrete carrier that unfoldings of finite coalgebras land in.
"""

from __future__ import annotations

from typing import Any, Iterable, Mapping

from .trees import (
    EPSILON,
    STAR,
    Label,
    TreeNW,
    Truncation,
    Word,
    RootPath,
    format_word,
    prefix_le,
    strip_prefix,
)


class FFTreeError(ValueError):
    def __init__(self, message: str, node: Word | None = None):
        super().__init__(message if node is None else f"{message} (at node {format_word(node)})")
        self.node = node


class NotAPartition(FFTreeError):
    pass


class NoRoot(FFTreeError):
    pass


class NotConvex(FFTreeError):
    pass


class UnknownNode(FFTreeError):
    pass


class NotARoot(FFTreeError):
    pass


class TruncationNotAllowed(FFTreeError):
    pass


def _check_tree_shape(labels: dict[Word, Label], allow_truncation: bool) -> dict[Word, int]:
    """Prefix closure, child contiguity, and label policy; returns arities."""
    if EPSILON not in labels:
        raise FFTreeError("tree has no root", EPSILON)
    arity: dict[Word, int] = {w: 0 for w in labels}
    for w in labels:
        if w and w[:-1] not in labels:
            raise FFTreeError("parent node missing", w)
    for w in labels:
        if w:
            arity[w[:-1]] += 1
    for w, k in arity.items():
        for i in range(k):
            if w + (i,) not in labels:
                raise FFTreeError(f"child {i} missing among {k}", w)
    for w, lab in labels.items():
        if lab is STAR:
            raise FFTreeError("star labels are reserved for fragment leaves", w)
        if isinstance(lab, Truncation):
            if not allow_truncation:
                raise TruncationNotAllowed("truncation marker in a plain tree", w)
            if arity[w]:
                raise TruncationNotAllowed("truncation marker on an inner node", w)
    return arity


class FFTree:
    """An immutable labelled tree with a fragmentation partition.

    The partition is stored as a node-to-block-root map so membership
    and block-root queries are O(1).
    """

    __slots__ = ("_labels", "_arity", "_root_of", "_succ", "_key", "_hash")

    def __init__(
        self,
        labels: Mapping[Word, Label],
        partition: Iterable[Iterable[Word]] | Mapping[Word, Any],
        allow_truncation: bool = False,
    ):
        labels = dict(labels)
        arity = _check_tree_shape(labels, allow_truncation)

        if isinstance(partition, Mapping):
            grouped: dict[Any, list[Word]] = {}
            for node, cls in partition.items():
                grouped.setdefault(cls, []).append(node)
            classes = list(grouped.values())
        else:
            classes = [list(cls) for cls in partition]

        root_of: dict[Word, Word] = {}
        for cls in classes:
            if not cls:
                continue
            members = sorted(cls, key=len)
            member_set = set(members)
            root = members[0]
            for v in members:
                if v not in labels:
                    raise NotAPartition("partition mentions a non-node", v)
                if v in root_of:
                    raise NotAPartition("node in two blocks", v)
                if not prefix_le(root, v):
                    raise NoRoot(f"block {sorted(map(format_word, members))} has no minimum")
            for v in members:
                # convexity: everything between the root and v is in the block
                u = v
                while u != root:
                    u = u[:-1]
                    if u not in member_set:
                        raise NotConvex("node missing from its block", u)
            for v in members:
                root_of[v] = root
        missing = set(labels) - set(root_of)
        if missing:
            raise NotAPartition("partition does not cover every node", min(missing, key=len))

        self._labels = labels
        self._arity = arity
        self._root_of = root_of
        succ: dict[Word, list[Word]] = {r: [] for r in set(root_of.values())}
        for r in succ:
            if r != EPSILON:
                succ[root_of[r[:-1]]].append(r)
        self._succ = {r: tuple(sorted(kids)) for r, kids in succ.items()}
        self._key = (
            tuple(sorted(labels.items(), key=lambda kv: kv[0])),
            tuple(sorted(root_of.items())),
        )
        self._hash = hash(self._key)

    @classmethod
    def _trusted(cls, labels: dict[Word, Label], root_of: dict[Word, Word]) -> "FFTree":
        out = object.__new__(cls)
        out._labels = labels
        arity = {w: 0 for w in labels}
        for w in labels:
            if w:
                arity[w[:-1]] += 1
        out._arity = arity
        out._root_of = root_of
        succ: dict[Word, list[Word]] = {r: [] for r in set(root_of.values())}
        for r in succ:
            if r != EPSILON:
                succ[root_of[r[:-1]]].append(r)
        out._succ = {r: tuple(sorted(kids)) for r, kids in succ.items()}
        out._key = (
            tuple(sorted(labels.items(), key=lambda kv: kv[0])),
            tuple(sorted(root_of.items())),
        )
        out._hash = hash(out._key)
        return out

    # -- basic views ---------------------------------------------------

    @property
    def nodes(self) -> frozenset[Word]:
        return frozenset(self._labels)

    def label(self, w: Word) -> Label:
        try:
            return self._labels[w]
        except KeyError:
            raise UnknownNode("no such node", w) from None

    def labels(self) -> dict[Word, Label]:
        return dict(self._labels)

    def arity(self, w: Word) -> int:
        if w not in self._arity:
            raise UnknownNode("no such node", w)
        return self._arity[w]

    def partition(self) -> frozenset[frozenset[Word]]:
        blocks: dict[Word, set[Word]] = {}
        for node, root in self._root_of.items():
            blocks.setdefault(root, set()).add(node)
        return frozenset(frozenset(b) for b in blocks.values())

    def root_map(self) -> dict[Word, Word]:
        return dict(self._root_of)

    # -- roots and measures --------------------------------------------

    def roots(self) -> frozenset[Word]:
        return frozenset(self._succ)

    def frag_root(self, w: Word) -> Word:
        if w not in self._root_of:
            raise UnknownNode("no such node", w)
        return self._root_of[w]

    def imm_succ(self, w: Word, v: Word) -> bool:
        """True iff ``v`` is a block root immediately above the root ``w``."""
        if w not in self._root_of or v not in self._root_of:
            raise UnknownNode("no such node", w if w not in self._root_of else v)
        return v in self._succ and v != EPSILON and self._root_of[v[:-1]] == w

    def succ_roots(self, w: Word) -> tuple[Word, ...]:
        if w not in self._succ:
            raise NotARoot("not a block root", w)
        return self._succ[w]

    def fheight(self, w: Word) -> int:
        """Number of block roots strictly below ``w``."""
        root = self.frag_root(w)
        n = 0 if root == w else 1
        while root != EPSILON:
            root = self._root_of[root[:-1]]
            n += 1
        return n

    def root_path_of(self, w: Word) -> RootPath:
        """The chain of root-to-root steps reaching the block root ``w``."""
        if w not in self._succ:
            raise NotARoot("not a block root", w)
        parts: list[Word] = []
        while w != EPSILON:
            below = self._root_of[w[:-1]]
            parts.append(strip_prefix(below, w))
            w = below
        return tuple(reversed(parts))

    # -- fragments and subtrees ----------------------------------------

    def tree_fragment(self, w: Word) -> TreeNW:
        """The finite piece rooted at ``w``: its block plus star leaves."""
        if w not in self._succ:
            raise NotARoot("not a block root", w)
        out: dict[Word, Label] = {}
        for v, root in self._root_of.items():
            if root == w:
                out[strip_prefix(w, v)] = self._labels[v]
        for v in self._succ[w]:
            out[strip_prefix(w, v)] = STAR
        return TreeNW(out)

    def subtree(self, w: Word) -> "FFTree":
        """The fragmented tree generated at block root ``w``."""
        if w not in self._succ:
            raise NotARoot("not a block root", w)
        n = len(w)
        labels = {v[n:]: lab for v, lab in self._labels.items() if prefix_le(w, v)}
        root_of = {
            v[n:]: r[n:] for v, r in self._root_of.items() if prefix_le(w, v)
        }
        return FFTree._trusted(labels, root_of)

    def destruct(self) -> tuple[TreeNW, dict[Word, "FFTree"]]:
        """Split into the root piece and the subtree glued at each star."""
        frag = self.tree_fragment(EPSILON)
        return frag, {w: self.subtree(w) for w in self._succ[EPSILON]}

    def __eq__(self, other: object) -> bool:
        return isinstance(other, FFTree) and self._key == other._key

    def __hash__(self) -> int:
        return self._hash

    def __repr__(self) -> str:
        return f"FFTree({len(self._labels)} nodes, {len(self._succ)} blocks)"


def validate_fftree(
    labels: Mapping[Word, Label],
    partition: Iterable[Iterable[Word]] | Mapping[Word, Any],
    allow_truncation: bool = False,
) -> FFTree:
    """Check the fragmentation properties and wrap the result."""
    return FFTree(labels, partition, allow_truncation=allow_truncation)


def construct(fragment: TreeNW, parts: Mapping[Word, FFTree]) -> FFTree:
    """Glue ``parts[w]`` over each star leaf ``w`` of ``fragment``.

    Inverse of :meth:`FFTree.destruct`: the proper nodes of the fragment
    become one block and each glued tree keeps its own fragmentation.
    """
    missing = fragment.nw_leaves - set(parts)
    if missing:
        raise ValueError(f"no tree glued at {format_word(min(missing))}")
    labels: dict[Word, Label] = {}
    root_of: dict[Word, Word] = {}
    for w in fragment.proper_nodes:
        labels[w] = fragment.label(w)
        root_of[w] = EPSILON
    for w in fragment.nw_leaves:
        sub = parts[w]
        for v, lab in sub._labels.items():
            labels[w + v] = lab
        for v, r in sub._root_of.items():
            root_of[w + v] = w + r
    return FFTree._trusted(labels, root_of)


# -- destructor-driven navigation, written exactly as the recursive
#    clauses so they can serve as an independent path in tests ----------


def ff_is_root_path(tree: FFTree, path: RootPath) -> bool:
    if not path:
        return True
    frag, parts = tree.destruct()
    w = path[0]
    return w in frag.nw_leaves and ff_is_root_path(parts[w], path[1:])


def ff_subelement(tree: FFTree, path: RootPath) -> FFTree:
    if not path:
        return tree
    frag, parts = tree.destruct()
    if path[0] not in frag.nw_leaves:
        raise NotARoot("path leaves the tree", path[0])
    return ff_subelement(parts[path[0]], path[1:])


def ff_fragment(tree: FFTree, path: RootPath) -> TreeNW:
    return ff_subelement(tree, path).tree_fragment(EPSILON)


def ff_root_paths(tree: FFTree) -> list[RootPath]:
    """All root paths, enumerated from the destructor side."""
    out: list[RootPath] = [()]
    frag, parts = tree.destruct()
    for w in sorted(frag.nw_leaves):
        out.extend((w,) + rest for rest in ff_root_paths(parts[w]))
    return out
