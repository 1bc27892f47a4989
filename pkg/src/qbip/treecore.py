"""Trees with perfect matchings: labeling, alternating paths, and enumeration.

A tree on 2p vertices with a perfect matching (necessarily unique) is held as
a MatchedTree: the underlying tree, the matching as an ordered list of pairs
(l_i, r_i), and the induced bipartition sides.  Pair order is the labeling
authority for every matrix built downstream, so all relabeling helpers live
here.

The alternation convention used throughout: a u-v path is alternating when its
edges strictly alternate matching / non-matching AND both terminal edges are
matching edges.  Consequently every alternating path starts with the matching
edge at its endpoint, has k matching and k-1 non-matching edges, and joins
opposite sides.  Odd/even refers to the parity of k.
"""

from __future__ import annotations

import random
from enum import Enum
from typing import NamedTuple


class NotATree(ValueError):
    pass


class NotNonsingular(ValueError):
    """The tree has no perfect matching."""


class Tree:
    """Connected acyclic graph on vertices 0..n-1, held immutably."""

    __slots__ = ("n", "edges", "adj")

    def __init__(self, edges):
        edges = [tuple(sorted(e)) for e in edges]
        if not edges:
            raise NotATree("a tree needs at least one edge here")
        seen = set()
        verts = set()
        for u, v in edges:
            if u == v:
                raise NotATree(f"self-loop at {u}")
            if not (isinstance(u, int) and isinstance(v, int)) or u < 0:
                raise NotATree(f"bad vertex ids in edge {(u, v)}")
            if (u, v) in seen:
                raise NotATree(f"duplicate edge {(u, v)}")
            seen.add((u, v))
            verts.add(u)
            verts.add(v)
        n = max(verts) + 1
        if verts != set(range(n)):
            raise NotATree("vertex ids must cover 0..n-1")
        if len(edges) != n - 1:
            raise NotATree(f"{len(edges)} edges on {n} vertices")
        adj = [[] for _ in range(n)]
        for u, v in edges:
            adj[u].append(v)
            adj[v].append(u)
        # connected + n-1 edges implies acyclic
        stack, reached = [0], {0}
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in reached:
                    reached.add(y)
                    stack.append(y)
        if len(reached) != n:
            raise NotATree("graph is disconnected")
        self.n = n
        self.edges = tuple(sorted(edges))
        self.adj = tuple(tuple(sorted(a)) for a in adj)

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    def __eq__(self, other):
        if not isinstance(other, Tree):
            return NotImplemented
        return self.edges == other.edges

    def __hash__(self):
        return hash(self.edges)

    def __repr__(self):
        return f"Tree(n={self.n}, edges={list(self.edges)})"

    def to_json(self) -> dict:
        return {"edges": [list(e) for e in self.edges]}


def parse_tree(edge_list) -> Tree:
    """Validate an edge list into a Tree."""
    return Tree(edge_list)


def perfect_matching(tree: Tree):
    """The unique perfect matching, by leaf stripping.

    A leaf is forced to match its neighbor; remove both and repeat.  This
    consumes the whole tree exactly when a perfect matching exists.
    """
    deg = [tree.degree(v) for v in range(tree.n)]
    alive = [True] * tree.n
    leaves = [v for v in range(tree.n) if deg[v] == 1]
    pairs = []
    removed = 0
    while leaves:
        v = leaves.pop()
        if not alive[v]:
            continue
        if deg[v] == 0:
            raise NotNonsingular(f"vertex {v} left unmatched")
        u = next(w for w in tree.adj[v] if alive[w])
        pairs.append((v, u) if v < u else (u, v))
        alive[v] = alive[u] = False
        removed += 2
        for w in tree.adj[u]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    leaves.append(w)
        for w in tree.adj[v]:
            if alive[w]:
                deg[w] -= 1
                if deg[w] == 1:
                    leaves.append(w)
    if removed != tree.n:
        raise NotNonsingular("leaf stripping stalled; no perfect matching")
    return tuple(sorted(pairs))


class MatchedTree:
    """A nonsingular tree with an ordered standard labeling.

    pairs[i] = (l, r) is the i-th matching pair (paper-style index i+1); the
    set of first components is the L side.
    """

    __slots__ = ("tree", "pairs", "side_of", "index_of")

    def __init__(self, tree: Tree, pairs):
        pairs = tuple((int(l), int(r)) for l, r in pairs)
        if tree.n != 2 * len(pairs):
            raise NotNonsingular("pair list does not cover the tree")
        side = {}
        index = {}
        for i, (l, r) in enumerate(pairs):
            if tuple(sorted((l, r))) not in tree.edges:
                raise NotNonsingular(f"pair {(l, r)} is not an edge")
            side[l] = "L"
            side[r] = "R"
            index[l] = i
            index[r] = i
        if len(side) != tree.n:
            raise NotNonsingular("pairs overlap or miss vertices")
        for u, v in tree.edges:
            if side[u] == side[v]:
                raise NotNonsingular("pair sides do not 2-color the tree")
        self.tree = tree
        self.pairs = pairs
        self.side_of = side
        self.index_of = index

    @property
    def p(self) -> int:
        return len(self.pairs)

    def l_vertex(self, i: int) -> int:
        return self.pairs[i][0]

    def r_vertex(self, i: int) -> int:
        return self.pairs[i][1]

    @property
    def l_vertices(self):
        return tuple(l for l, _ in self.pairs)

    @property
    def r_vertices(self):
        return tuple(r for _, r in self.pairs)

    def partner(self, v: int) -> int:
        l, r = self.pairs[self.index_of[v]]
        return r if v == l else l

    def matching_edges(self):
        return tuple(sorted(tuple(sorted(p)) for p in self.pairs))

    def is_matching_edge(self, u: int, v: int) -> bool:
        return self.index_of[u] == self.index_of[v]

    def __eq__(self, other):
        if not isinstance(other, MatchedTree):
            return NotImplemented
        return self.tree == other.tree and self.pairs == other.pairs

    def __repr__(self):
        return f"MatchedTree(p={self.p}, pairs={list(self.pairs)})"

    def to_json(self) -> dict:
        return {
            "edges": [list(e) for e in self.tree.edges],
            "matching": [list(e) for e in self.matching_edges()],
            "labels": {
                "L": list(self.l_vertices),
                "R": list(self.r_vertices),
            },
        }

    @classmethod
    def from_json(cls, data) -> "MatchedTree":
        tree = Tree(data["edges"])
        ls = data["labels"]["L"]
        rs = data["labels"]["R"]
        if len(ls) != len(rs):
            raise NotNonsingular("label sides have different lengths")
        mt = cls(tree, list(zip(ls, rs)))
        declared = tuple(sorted(tuple(sorted(e)) for e in data["matching"]))
        if declared != mt.matching_edges():
            raise NotNonsingular("matching field disagrees with labels")
        return mt


def standard_labeling(tree: Tree, matching=None) -> MatchedTree:
    """Canonical MatchedTree: vertex 0 on the L side, pairs by ascending L id."""
    if matching is None:
        matching = perfect_matching(tree)
    side = _two_color(tree)
    pairs = []
    for u, v in matching:
        l, r = (u, v) if side[u] == "L" else (v, u)
        pairs.append((l, r))
    pairs.sort()
    return MatchedTree(tree, pairs)


def _two_color(tree: Tree):
    side = {0: "L"}
    stack = [0]
    while stack:
        x = stack.pop()
        for y in tree.adj[x]:
            if y not in side:
                side[y] = "R" if side[x] == "L" else "L"
                stack.append(y)
    return side


def distances(tree: Tree):
    """All-pairs distances by BFS from every vertex."""
    n = tree.n
    out = []
    for s in range(n):
        dist = [-1] * n
        dist[s] = 0
        frontier = [s]
        while frontier:
            nxt = []
            for x in frontier:
                for y in tree.adj[x]:
                    if dist[y] < 0:
                        dist[y] = dist[x] + 1
                        nxt.append(y)
            frontier = nxt
        out.append(dist)
    return out


# ---------------------------------------------------------------------------
# alternating paths
# ---------------------------------------------------------------------------


class PathKind(Enum):
    ODD_ALTERNATING = "odd"
    EVEN_ALTERNATING = "even"
    NOT_ALTERNATING = "none"


class PathClass(NamedTuple):
    kind: PathKind
    adjacent: bool
    matching_edge: bool


def classify_path(mt: MatchedTree, u: int, v: int) -> PathClass:
    """Classify the unique u-v path by walking it edge by edge."""
    if u == v:
        raise ValueError("classify_path needs distinct endpoints")
    path = _tree_path(mt.tree, u, v)
    flags = [mt.is_matching_edge(a, b) for a, b in zip(path, path[1:])]
    adjacent = len(flags) == 1
    matching_edge = adjacent and flags[0]
    alternating = (
        flags[0]
        and flags[-1]
        and all(a != b for a, b in zip(flags, flags[1:]))
    )
    if not alternating:
        return PathClass(PathKind.NOT_ALTERNATING, adjacent, matching_edge)
    kind = (
        PathKind.ODD_ALTERNATING
        if sum(flags) % 2
        else PathKind.EVEN_ALTERNATING
    )
    return PathClass(kind, adjacent, matching_edge)


def _tree_path(tree: Tree, u: int, v: int):
    parent = {u: None}
    stack = [u]
    while stack:
        x = stack.pop()
        if x == v:
            break
        for y in tree.adj[x]:
            if y not in parent:
                parent[y] = x
                stack.append(y)
    path = [v]
    while path[-1] != u:
        path.append(parent[path[-1]])
    path.reverse()
    return path


def alternating_reach(mt: MatchedTree, v: int) -> dict[int, int]:
    """Endpoints of all alternating paths starting at v.

    Maps each reachable endpoint u to the number of matching edges on the
    alternating v-u path.  An alternating path from v must open with the
    matching edge at v, then each continuation is forced: one non-matching
    step followed by the new vertex's matching edge.  Single O(n) walk.
    """
    reach = {}
    first = mt.partner(v)
    reach[first] = 1
    stack = [(first, 1)]
    while stack:
        x, k = stack.pop()
        px = mt.partner(x)
        for w in mt.tree.adj[x]:
            if w == px:
                continue
            y = mt.partner(w)
            if y not in reach:
                reach[y] = k + 1
                stack.append((y, k + 1))
    return reach


def diff(mt: MatchedTree, v: int) -> int:
    """Even-minus-odd count of alternating paths starting at v.

    The length-0 path does not count.
    """
    return sum(1 if k % 2 == 0 else -1 for k in alternating_reach(mt, v).values())


# ---------------------------------------------------------------------------
# growing and shrinking by one matched pair
# ---------------------------------------------------------------------------


def attach_p2(mt: MatchedTree, v: int) -> MatchedTree:
    """Attach a new matched pair at v: add u, w with edges [v,u], [u,w].

    The bridging vertex u lands on the side opposite v, the new leaf w on
    v's side, and the new pair takes the last index.
    """
    n = mt.tree.n
    u, w = n, n + 1
    tree = Tree(list(mt.tree.edges) + [(v, u), (u, w)])
    new_pair = (w, u) if mt.side_of[v] == "L" else (u, w)
    return MatchedTree(tree, list(mt.pairs) + [new_pair])


class DetachResult(NamedTuple):
    tree: MatchedTree
    site: int
    removed_index: int


def detach_p2(mt: MatchedTree) -> DetachResult:
    """Remove a pendant matched pair; inverse of attach_p2 up to relabeling.

    Picks the smallest-id leaf whose matching partner has degree 2 (one
    always exists for p >= 2: take an endpoint of a longest path).  Returns
    the compacted smaller tree, the attachment site in its new ids, and the
    index of the removed pair.
    """
    if mt.p < 2:
        raise ValueError("detach_p2 needs p >= 2")
    tree = mt.tree
    w = next(
        v
        for v in range(tree.n)
        if tree.degree(v) == 1 and tree.degree(mt.partner(v)) == 2
    )
    u = mt.partner(w)
    site_old = next(x for x in tree.adj[u] if x != w)
    removed_index = mt.index_of[w]
    keep = sorted(x for x in range(tree.n) if x not in (u, w))
    relabel = {old: new for new, old in enumerate(keep)}
    edges = [
        (relabel[a], relabel[b])
        for a, b in tree.edges
        if a not in (u, w) and b not in (u, w)
    ]
    pairs = [
        (relabel[l], relabel[r])
        for i, (l, r) in enumerate(mt.pairs)
        if i != removed_index
    ]
    return DetachResult(MatchedTree(Tree(edges), pairs), relabel[site_old], removed_index)


# ---------------------------------------------------------------------------
# relabeling helpers
# ---------------------------------------------------------------------------


def permute_pairs(mt: MatchedTree, order) -> MatchedTree:
    """Reindex the matching pairs; order[i] is the old index of new pair i."""
    if sorted(order) != list(range(mt.p)):
        raise ValueError("order must be a permutation of the pair indices")
    return MatchedTree(mt.tree, [mt.pairs[i] for i in order])


def relabel_vertices(mt: MatchedTree, mapping) -> MatchedTree:
    """Apply a vertex-id permutation, keeping pair order and sides."""
    tree = Tree([(mapping[a], mapping[b]) for a, b in mt.tree.edges])
    return MatchedTree(tree, [(mapping[l], mapping[r]) for l, r in mt.pairs])


def sub_matched_tree(mt: MatchedTree, pair_indices):
    """Induced MatchedTree on the given pairs, in the given order.

    The pairs must induce a connected subtree.  Returns the compacted
    MatchedTree and the old-to-new vertex map.
    """
    verts = set()
    for i in pair_indices:
        verts.update(mt.pairs[i])
    keep = sorted(verts)
    relabel = {old: new for new, old in enumerate(keep)}
    edges = [
        (relabel[a], relabel[b])
        for a, b in mt.tree.edges
        if a in verts and b in verts
    ]
    pairs = [(relabel[mt.pairs[i][0]], relabel[mt.pairs[i][1]]) for i in pair_indices]
    return MatchedTree(Tree(edges), pairs), relabel


# ---------------------------------------------------------------------------
# canonical form and enumeration
# ---------------------------------------------------------------------------


def canonical_code(tree: Tree) -> bytes:
    """Canonical AHU encoding rooted at the centroid(s).

    Equal codes exactly characterize isomorphic trees; with two centroids the
    lexicographically smaller rooted encoding wins.
    """
    cents = _centroids(tree)
    return min(_ahu_encode(tree, c) for c in cents)


def _centroids(tree: Tree):
    n = tree.n
    size = [1] * n
    order = []
    parent = [-1] * n
    stack = [0]
    seen = [False] * n
    seen[0] = True
    while stack:
        x = stack.pop()
        order.append(x)
        for y in tree.adj[x]:
            if not seen[y]:
                seen[y] = True
                parent[y] = x
                stack.append(y)
    for x in reversed(order):
        if parent[x] >= 0:
            size[parent[x]] += size[x]
    best, cents = None, []
    for v in range(n):
        heaviest = max(
            (size[y] if parent[y] == v else n - size[v] for y in tree.adj[v]),
            default=0,
        )
        if best is None or heaviest < best:
            best, cents = heaviest, [v]
        elif heaviest == best:
            cents.append(v)
    return cents


def _ahu_encode(tree: Tree, root: int) -> bytes:
    # iterative post-order; recursion depth would track tree height
    code: dict[int, bytes] = {}
    stack = [(root, -1, False)]
    while stack:
        v, par, expanded = stack.pop()
        if expanded:
            kids = sorted(code[y] for y in tree.adj[v] if y != par)
            code[v] = b"(" + b"".join(kids) + b")"
        else:
            stack.append((v, par, True))
            for y in tree.adj[v]:
                if y != par:
                    stack.append((y, v, False))
    return code[root]


DEFAULT_ENUM_BOUND = 8


def enumerate_nonsingular(p: int, bound: int = DEFAULT_ENUM_BOUND):
    """All isomorphism classes of nonsingular trees on 2p vertices.

    Level k+1 is generated by attaching a pair at every vertex of every
    level-k tree (complete, because detach_p2 inverts some attachment), then
    deduplicated by canonical code.  Deterministic order: sorted by code.
    """
    if not 1 <= p <= bound:
        raise ValueError(f"p must be within 1..{bound}")
    level = {canonical_code(_P2.tree): _P2}
    for _ in range(p - 1):
        nxt = {}
        for _, t in sorted(level.items()):
            for v in range(t.tree.n):
                cand = attach_p2(t, v)
                code = canonical_code(cand.tree)
                if code not in nxt:
                    nxt[code] = cand
        level = nxt
    return [t for _, t in sorted(level.items())]


_P2 = MatchedTree(Tree([(0, 1)]), [(0, 1)])


def random_nonsingular(p: int, seed: int) -> MatchedTree:
    """Random nonsingular tree grown by p-1 attachments at uniform vertices.

    Driven by random.Random (Mersenne Twister), so a seed pins the tree.
    """
    if p < 1:
        raise ValueError("p must be >= 1")
    rng = random.Random(seed)
    t = _P2
    for _ in range(p - 1):
        t = attach_p2(t, rng.randrange(t.tree.n))
    return t


def load_tree_json(data) -> MatchedTree:
    """MatchedTree from tree JSON; labels are derived when absent."""
    if "labels" in data:
        return MatchedTree.from_json(data)
    return standard_labeling(Tree(data["edges"]))
