"""Minimax and alpha-beta search over small path-radius decision trees.

Trees are immutable: a :class:`GameTree` maps node ids to :class:`TreeNode`
records. Leaves carry a payoff (by default a raw arc radius) and may carry a
``label`` naming the radius the path ends on. Both search routines expand
children strictly in their stored order, so ordering changes what alpha-beta
cuts but never the backed-up value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Callable, Iterable, Mapping, Sequence

import numpy as np

MAX = "MAX"
MIN = "MIN"

# Candidate arc radii for the attacker's approach paths.
RADII: tuple[float, ...] = (20, 30, 40, 70, 80, 100, 120, 140, 160)

FIXTURE_NAMES = ("main", "ascending", "descending", "single_branch_max")


class MalformedTree(ValueError):
    """Raised when a tree violates its structural invariants."""

    def __init__(self, node_id, reason: str):
        super().__init__(f"node {node_id!r}: {reason}")
        self.node_id = node_id


@dataclass(frozen=True)
class TreeNode:
    id: str
    layer_kind: str
    children: tuple[str, ...] = ()
    leaf_value: float | None = None
    label: float | None = None

    @property
    def is_leaf(self) -> bool:
        return not self.children


@dataclass(frozen=True)
class GameTree:
    root: str
    nodes: Mapping[str, TreeNode]
    name: str = ""

    def __post_init__(self):
        validate(self)

    def __len__(self):
        return len(self.nodes)

    def __getitem__(self, node_id: str) -> TreeNode:
        return self.nodes[node_id]

    def leaves(self) -> list[TreeNode]:
        """Leaves in left-to-right order."""
        out = []
        stack = [self.root]
        while stack:
            node = self.nodes[stack.pop()]
            if node.is_leaf:
                out.append(node)
            else:
                stack.extend(reversed(node.children))
        return out


@dataclass(frozen=True)
class SearchWindow:
    alpha: float = -math.inf
    beta: float = math.inf


@dataclass(frozen=True)
class SearchResult:
    value: float
    principal_child: str | None
    visited: int
    pruned: int
    principal_path: tuple[str, ...] = field(default=(), compare=False)


def validate(tree: GameTree) -> None:
    """Check reachability, tree shape, leaf values and MAX/MIN alternation."""
    nodes = tree.nodes
    if tree.root not in nodes:
        raise MalformedTree(tree.root, "root not in node map")
    seen = set()
    stack = [tree.root]
    while stack:
        nid = stack.pop()
        if nid in seen:
            raise MalformedTree(nid, "reached twice (shared node or cycle)")
        seen.add(nid)
        node = nodes[nid]
        if node.layer_kind not in (MAX, MIN):
            raise MalformedTree(nid, f"unknown layer kind {node.layer_kind!r}")
        if node.children:
            if node.leaf_value is not None:
                raise MalformedTree(nid, "internal node carries a leaf value")
            for cid in node.children:
                if cid not in nodes:
                    raise MalformedTree(cid, f"child of {nid!r} is missing")
                if nodes[cid].layer_kind == node.layer_kind:
                    raise MalformedTree(cid, "layer kind does not alternate")
                stack.append(cid)
        else:
            if node.leaf_value is None or not math.isfinite(node.leaf_value):
                raise MalformedTree(nid, "leaf has no finite value")
    unreachable = set(nodes) - seen
    if unreachable:
        raise MalformedTree(sorted(unreachable)[0], "unreachable from root")


def minimax_value(tree: GameTree) -> SearchResult:
    """Exhaustive minimax. Used as the oracle for :func:`alphabeta_value`."""
    nodes = tree.nodes
    visited = 0

    def search(nid):
        nonlocal visited
        visited += 1
        node = nodes[nid]
        if not node.children:
            return node.leaf_value, (nid,)
        maximize = node.layer_kind == MAX
        best, best_path = None, ()
        for cid in node.children:
            v, path = search(cid)
            if best is None or (v > best if maximize else v < best):
                best, best_path = v, path
        return best, (nid,) + best_path

    value, path = search(tree.root)
    principal = path[1] if len(path) > 1 else None
    return SearchResult(value, principal, visited, 0, path)


def alphabeta_value(tree: GameTree, window: SearchWindow = SearchWindow()) -> SearchResult:
    """Fail-soft alpha-beta in stored child order.

    ``pruned`` counts child subtrees skipped by a cutoff. Ties at the root go
    to the lowest-index child, matching :func:`minimax_value`.
    """
    nodes = tree.nodes
    visited = 0
    pruned = 0

    def search(nid, alpha, beta):
        nonlocal visited, pruned
        visited += 1
        node = nodes[nid]
        children = node.children
        if not children:
            return node.leaf_value, (nid,)
        best_path = ()
        if node.layer_kind == MAX:
            best = -math.inf
            for i, cid in enumerate(children):
                v, path = search(cid, alpha, beta)
                if v > best or not best_path:
                    best, best_path = v, path
                if best > alpha:
                    alpha = best
                if alpha >= beta:
                    pruned += len(children) - i - 1
                    break
        else:
            best = math.inf
            for i, cid in enumerate(children):
                v, path = search(cid, alpha, beta)
                if v < best or not best_path:
                    best, best_path = v, path
                if best < beta:
                    beta = best
                if alpha >= beta:
                    pruned += len(children) - i - 1
                    break
        return best, (nid,) + best_path

    value, path = search(tree.root, window.alpha, window.beta)
    principal = path[1] if len(path) > 1 else None
    return SearchResult(value, principal, visited, pruned, path)


# -- tree files -------------------------------------------------------------

def parse_tree(text: str, name: str = "") -> GameTree:
    """Parse the plain-text tree format.

    One node per line: ``id kind parent [value]``; ``parent`` is ``-`` for the
    root. Child order follows line order. ``#`` starts a comment.
    """
    kinds: dict[str, str] = {}
    values: dict[str, float | None] = {}
    children: dict[str, list[str]] = {}
    root = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) not in (3, 4):
            raise MalformedTree(parts[0], f"line {lineno}: expected 3 or 4 fields")
        nid, kind, parent = parts[:3]
        if nid in kinds:
            raise MalformedTree(nid, f"line {lineno}: duplicate id")
        kinds[nid] = kind.upper()
        try:
            values[nid] = float(parts[3]) if len(parts) == 4 else None
        except ValueError:
            raise MalformedTree(nid, f"line {lineno}: bad value {parts[3]!r}") from None
        children.setdefault(nid, [])
        if parent == "-":
            if root is not None:
                raise MalformedTree(nid, f"line {lineno}: second root")
            root = nid
        else:
            children.setdefault(parent, []).append(nid)
    if root is None:
        raise MalformedTree("-", "no root line")
    for parent in children:
        if parent not in kinds:
            raise MalformedTree(parent, "referenced as parent but never defined")
    nodes = {
        nid: TreeNode(nid, kinds[nid], tuple(children[nid]), values[nid],
                      values[nid])
        for nid in kinds
    }
    return GameTree(root, nodes, name)


def format_tree(tree: GameTree) -> str:
    lines = []
    parent_of = {c: n.id for n in tree.nodes.values() for c in n.children}

    def emit(nid):
        node = tree.nodes[nid]
        fields = [nid, node.layer_kind, parent_of.get(nid, "-")]
        if node.is_leaf:
            fields.append(f"{node.leaf_value:g}")
        lines.append(" ".join(fields))
        for cid in node.children:
            emit(cid)

    emit(tree.root)
    return "\n".join(lines) + "\n"


def load_tree(path: str | Path) -> GameTree:
    path = Path(path)
    return parse_tree(path.read_text(), name=path.stem)


def build_fixture(name: str) -> GameTree:
    """Load one of the checked-in worked trees by name."""
    if name not in FIXTURE_NAMES:
        raise KeyError(f"unknown fixture {name!r}; expected one of {FIXTURE_NAMES}")
    res = resources.files("tankgame") / "data" / "fixtures" / f"{name}.tree"
    return parse_tree(res.read_text(), name=name)


# -- tree construction ------------------------------------------------------

def _other(kind):
    return MIN if kind == MAX else MAX


def uniform_tree(candidates: Sequence[float], payoff: Callable[[tuple], float],
                 depth: int, root_kind: str = MAX, name: str = "") -> GameTree:
    """Alternating tree where every internal node branches over ``candidates``.

    Leaf payoff is ``payoff(path)`` with ``path`` the tuple of radii chosen
    from the root down.
    """
    nodes: dict[str, TreeNode] = {}

    def build(nid, kind, path):
        if len(path) == depth:
            nodes[nid] = TreeNode(nid, kind, (), float(payoff(path)), path[-1])
            return
        kids = []
        for i, r in enumerate(candidates):
            cid = f"{nid}.{i}"
            build(cid, _other(kind), path + (r,))
            kids.append(cid)
        nodes[nid] = TreeNode(nid, kind, tuple(kids), None, path[-1] if path else None)

    build("r", root_kind, ())
    return GameTree("r", nodes, name)


def revalue(tree: GameTree, payoff: Callable[[float], float]) -> GameTree:
    """Same shape, leaf payoffs recomputed from each leaf's radius label."""
    nodes = {
        nid: (TreeNode(nid, n.layer_kind, (), float(payoff(n.label)), n.label)
              if n.is_leaf else n)
        for nid, n in tree.nodes.items()
    }
    return GameTree(tree.root, nodes, tree.name)


def _as_path_payoff(payoff):
    if payoff is None:
        return lambda path: path[-1]
    if isinstance(payoff, Mapping):
        return lambda path: payoff[path[-1]]
    return payoff


def choose_radius(candidates: Sequence[float], payoff=None, depth: int = 1, *,
                  root_kind: str = MAX, shape: GameTree | None = None) -> float:
    """Pick an arc radius by alpha-beta search.

    Without ``shape`` a uniform tree of ``depth`` plies is built over
    ``candidates`` and the radius on the principal root child is returned.
    ``payoff`` may be a callable on the radius path, a radius->payoff mapping
    (applied to the last radius on the path) or ``None`` for identity.

    With ``shape`` the given tree's leaf radii are re-scored by ``payoff``
    (a radius->payoff callable or mapping) and the radius at the end of the
    principal variation is returned, i.e. the path the opponent is expected
    to settle on.
    """
    candidates = list(candidates)
    if not candidates:
        raise ValueError("no candidate radii")
    if shape is not None:
        if payoff is None:
            tree = shape
        else:
            fn = payoff.__getitem__ if isinstance(payoff, Mapping) else payoff
            tree = revalue(shape, fn)
        result = alphabeta_value(tree)
        leaf = tree.nodes[result.principal_path[-1]]
        if leaf.label not in candidates:
            raise ValueError(f"principal leaf radius {leaf.label} not a candidate")
        return leaf.label
    if depth < 1:
        raise ValueError("depth must be >= 1")
    tree = uniform_tree(candidates, _as_path_payoff(payoff), depth, root_kind)
    result = alphabeta_value(tree)
    return tree.nodes[result.principal_child].label


def random_tree(rng: np.random.Generator, max_depth: int = 5, max_branching: int = 4,
                values: Sequence[float] = RADII, root_kind: str = MAX,
                name: str = "") -> GameTree:
    """Random alternating tree; every internal node has 1..max_branching kids.

    Depth of each branch is drawn so leaves appear at mixed levels.
    """
    nodes: dict[str, TreeNode] = {}
    counter = iter(range(1 << 30))
    values = np.asarray(values, dtype=float)

    def build(kind, depth_left):
        nid = f"n{next(counter)}"
        if depth_left == 0 or (depth_left < max_depth and rng.random() < 0.2):
            v = float(values[rng.integers(len(values))])
            nodes[nid] = TreeNode(nid, kind, (), v, v)
            return nid
        k = int(rng.integers(1, max_branching + 1))
        kids = tuple(build(_other(kind), depth_left - 1) for _ in range(k))
        nodes[nid] = TreeNode(nid, kind, kids)
        return nid

    depth = int(rng.integers(1, max_depth + 1))
    root = build(root_kind, depth)
    return GameTree(root, nodes, name)


def reorder(tree: GameTree, key: Callable[[TreeNode, list[str]], Iterable[str]]) -> GameTree:
    """Copy of ``tree`` with each internal node's children reordered by ``key``."""
    nodes = {
        nid: (TreeNode(nid, n.layer_kind, tuple(key(n, list(n.children))),
                       n.leaf_value, n.label) if n.children else n)
        for nid, n in tree.nodes.items()
    }
    return GameTree(tree.root, nodes, tree.name)


def best_first(tree: GameTree) -> GameTree:
    """Children sorted by exact value, best for the mover first (stable)."""
    exact: dict[str, float] = {}

    def value(nid):
        node = tree.nodes[nid]
        if node.is_leaf:
            v = node.leaf_value
        else:
            vals = [value(c) for c in node.children]
            v = max(vals) if node.layer_kind == MAX else min(vals)
        exact[nid] = v
        return v

    value(tree.root)
    return reorder(tree, lambda n, kids: sorted(
        kids, key=lambda c: -exact[c] if n.layer_kind == MAX else exact[c]))
