"""Constructors of node orderings that certify small beta.

Chordal conflict graphs admit a perfect elimination ordering (every node's
later neighbors form a clique), which makes beta exactly 1 and the core
solver optimal. More general graphs are handled through frontier arguments:
a tree decomposition of the object graph yields an ordering whose frontier
sets are bags, bounding beta by width + 1; subgraphs of k-dimensional grids
are ordered by coordinate sum for beta <= k. Two further orderings exist for
analysis: decreasing weight (degrades the solver to the greedy baseline) and
an ordering seeded with a known independent set (makes the solver optimal).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UnsupportedOrderingError, ValidationError
from .graphs import Bid, BidGraph, ObjectGraph, Ordering, connected_in, validate_germane


@dataclass
class NotChordal:
    """Witness of non-chordality: ``a`` and ``b`` are later neighbors of
    ``node`` under the candidate ordering but share no edge."""

    node: str
    a: str
    b: str


@dataclass
class TreeDecomposition:
    """A tree whose nodes carry object bags.

    Validity (checked by :func:`validate_tree_decomposition`): bags cover all
    objects, every object-graph edge lies inside some bag, and each object's
    occurrence set forms a connected subtree. Width is max bag size - 1.
    """

    tree_nodes: list[str]
    tree_edges: list[tuple[str, str]]
    bags: dict[str, frozenset[str]]
    root: str | None = None

    def width(self) -> int:
        return max((len(b) for b in self.bags.values()), default=0) - 1

    def tree_adj(self) -> dict[str, list[str]]:
        adj: dict[str, list[str]] = {t: [] for t in self.tree_nodes}
        for a, b in self.tree_edges:
            adj[a].append(b)
            adj[b].append(a)
        return adj


def validate_tree_decomposition(og: ObjectGraph, td: TreeDecomposition) -> list[str]:
    """Check tree shape plus the three decomposition properties.

    Returns human-readable violations, each naming a concrete witness.
    """
    violations: list[str] = []
    nodes = set(td.tree_nodes)
    if len(nodes) != len(td.tree_nodes):
        violations.append("tree: duplicate tree-node ids")
        return violations
    if set(td.bags) != nodes:
        violations.append("tree: bags must be keyed by exactly the tree nodes")
        return violations
    adj = {t: set() for t in td.tree_nodes}
    for a, b in td.tree_edges:
        if a not in nodes or b not in nodes or a == b:
            violations.append(f"tree: bad edge {a!r}-{b!r}")
            return violations
        adj[a].add(b)
        adj[b].add(a)
    if td.tree_nodes:
        if len(td.tree_edges) != len(td.tree_nodes) - 1:
            violations.append("tree: edge count is not |nodes|-1 (not a tree)")
            return violations
        seen = {td.tree_nodes[0]}
        stack = [td.tree_nodes[0]]
        while stack:
            t = stack.pop()
            for u in adj[t]:
                if u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(nodes):
            violations.append("tree: not connected")
            return violations
    if td.root is not None and td.root not in nodes:
        violations.append(f"tree: root {td.root!r} is not a tree node")

    covered = set()
    for t in td.tree_nodes:
        for o in td.bags[t]:
            if o not in og:
                violations.append(f"property 1: bag {t!r} contains undeclared object {o!r}")
            covered.add(o)
    for o in og.objects:
        if o not in covered:
            violations.append(f"property 1: object {o!r} is in no bag")
    for a, b in og.edges:
        if not any(a in td.bags[t] and b in td.bags[t] for t in td.tree_nodes):
            violations.append(f"property 2: edge {a!r}-{b!r} is inside no bag")
    # property 3: occurrence set of each object must induce a connected subtree
    for o in og.objects:
        occ = {t for t in td.tree_nodes if o in td.bags[t]}
        if not occ:
            continue
        start = sorted(occ)[0]
        seen = {start}
        stack = [start]
        while stack:
            t = stack.pop()
            for u in adj[t]:
                if u in occ and u not in seen:
                    seen.add(u)
                    stack.append(u)
        if len(seen) != len(occ):
            violations.append(f"property 3: occurrences of object {o!r} are disconnected in the tree")
    return violations


def tree_decomposition_ordering(
    td: TreeDecomposition,
    bids: list[Bid],
    object_graph: ObjectGraph | None = None,
) -> Ordering:
    """Order bids through a tree decomposition of the object graph.

    The tree is rooted (given root, else lowest tree-node id) and its nodes
    are linearized descendants-first: the reverse of a depth-first pre-order
    that visits children in ascending id order. Each bid A is anchored at the
    greatest tree node (deepest under that linearization... the one latest in
    the ancestor-first order) whose bag intersects A; bids sort by anchor
    rank, ties by bid id. The anchor bag becomes A's frontier set, so the
    resulting bound is width + 1.

    When ``object_graph`` is given, the decomposition and bid germaneness are
    fully validated first; otherwise only bag coverage of bid objects is
    checked.
    """
    if object_graph is not None:
        violations = validate_tree_decomposition(object_graph, td)
        if violations:
            raise ValidationError("invalid tree decomposition: " + "; ".join(violations))
        bad = validate_germane(object_graph, bids)
        if bad:
            raise ValidationError(f"bid {bad[0]!r} is not germane (object set disconnected)")
    if not td.tree_nodes:
        raise ValidationError("tree decomposition has no nodes")

    root = td.root if td.root is not None else sorted(td.tree_nodes)[0]
    adj = td.tree_adj()
    pre_index: dict[str, int] = {}
    stack = [root]
    seen = {root}
    while stack:
        t = stack.pop()
        pre_index[t] = len(pre_index)
        # reversed ascending so the lowest-id child is visited first
        for u in sorted(adj[t], reverse=True):
            if u not in seen:
                seen.add(u)
                stack.append(u)

    # first pre-order occurrence per object == greatest tree node in the
    # ancestors-are-greater linear order
    obj_anchor: dict[str, int] = {}
    by_pre = sorted(td.tree_nodes, key=lambda t: pre_index[t])
    for t in by_pre:
        for o in td.bags[t]:
            if o not in obj_anchor:
                obj_anchor[o] = pre_index[t]

    anchor_node = {pre_index[t]: t for t in td.tree_nodes}
    keyed = []
    frontier: dict[str, frozenset[str]] = {}
    for b in bids:
        anchors = []
        for o in sorted(b.objects):
            if o not in obj_anchor:
                raise ValidationError(f"bid {b.id!r} object {o!r} appears in no bag")
            anchors.append(obj_anchor[o])
        t_a = min(anchors)
        frontier[b.id] = td.bags[anchor_node[t_a]]
        # descendants-first: larger pre-order index sorts earlier
        keyed.append((-t_a, b.id))
    keyed.sort()
    return Ordering([bid_id for _, bid_id in keyed], "tree-decomposition", frontier)


def min_degree_heuristic_decomposition(og: ObjectGraph) -> TreeDecomposition:
    """Heuristic tree decomposition by minimum-degree elimination.

    Repeatedly eliminates a minimum-degree object (ties by id), forming a bag
    from its closed neighborhood and filling the neighborhood into a clique.
    Bags are wired into a tree by linking each bag to the bag of its earliest
    subsequently-eliminated member; bags left parentless (component ends) are
    chained together. The result is validated before being returned; the
    width is heuristic, not optimal.
    """
    if not og.objects:
        raise ValidationError("object graph is empty")
    work = {o: set(og.adj[o]) for o in og.objects}
    elim_pos: dict[str, int] = {}
    bags: dict[str, frozenset[str]] = {}
    order: list[str] = []
    remaining = set(og.objects)
    while remaining:
        v = min(remaining, key=lambda o: (len(work[o]), o))
        nbrs = sorted(work[v])
        bags[v] = frozenset([v] + nbrs)
        elim_pos[v] = len(order)
        order.append(v)
        for i in range(len(nbrs)):
            work[nbrs[i]].discard(v)
            for j in range(i + 1, len(nbrs)):
                work[nbrs[i]].add(nbrs[j])
                work[nbrs[j]].add(nbrs[i])
        remaining.discard(v)
        del work[v]

    edges: list[tuple[str, str]] = []
    orphans: list[str] = []
    for v in order:
        later = [u for u in bags[v] if u != v]
        if later:
            parent = min(later, key=lambda u: elim_pos[u])
            edges.append((v, parent))
        else:
            orphans.append(v)
    for i in range(1, len(orphans)):
        edges.append((orphans[i - 1], orphans[i]))

    td = TreeDecomposition(tree_nodes=order, tree_edges=edges, bags=bags, root=order[-1])
    problems = validate_tree_decomposition(og, td)
    if problems:
        raise RuntimeError("internal error: heuristic produced an invalid decomposition: " + problems[0])
    return td


def grid_ordering(coords: dict[str, tuple[int, ...]]) -> Ordering:
    """Order nodes by ascending coordinate sum, then lexicographic coordinates.

    For conflict graphs that are subgraphs of the k-dimensional rectangular
    grid this certifies beta <= k: every edge leaves the endpoint with the
    smaller coordinate sum, so a node's successors sit among its at most k
    "increasing" grid neighbors.
    """
    if not coords:
        raise ValidationError("no coordinates given")
    dims = {len(v) for v in coords.values()}
    if len(dims) != 1:
        raise ValidationError("all coordinate vectors must have the same dimension")
    seen: dict[tuple[int, ...], str] = {}
    for u in sorted(coords):
        v = tuple(coords[u])
        if v in seen:
            raise ValidationError(f"duplicate coordinates {v} for {seen[v]!r} and {u!r}")
        seen[v] = u
    order = sorted(coords, key=lambda u: (sum(coords[u]), tuple(coords[u])))
    return Ordering(order, "grid")


def decreasing_weight_ordering(g: BidGraph) -> Ordering:
    """Strictly decreasing weight, ties broken by ascending bid id."""
    order = sorted(g.ids, key=lambda u: (-g.weights[u], u))
    return Ordering(order, "decreasing-weight")


def planted_optimal_ordering(g: BidGraph, independent_set) -> Ordering:
    """Members of a known independent set first (by id), the rest after.

    With an exact maximum-weight independent set planted, the opportunity
    cost solver recovers the optimal total weight.
    """
    chosen = set(independent_set)
    for u in sorted(chosen):
        if u not in g.adj:
            raise ValidationError(f"planted set member {u!r} is not a bid node")
        clash = sorted(v for v in g.adj[u] if v in chosen)
        if clash:
            raise ValidationError(f"planted set is not independent: {u!r} conflicts with {clash[0]!r}")
    order = sorted(chosen) + sorted(u for u in g.ids if u not in chosen)
    return Ordering(order, "planted-optimal")


class _Block:
    __slots__ = ("members", "prev", "next")

    def __init__(self):
        self.members: dict[str, None] = {}
        self.prev: _Block | None = None
        self.next: _Block | None = None


def lexbfs_peo(g: BidGraph) -> Ordering | NotChordal:
    """Chordality recognition with a certified perfect elimination ordering.

    Runs lexicographic breadth-first search by partition refinement, reverses
    the visit order into a candidate elimination ordering, then verifies it:
    for every node, the later neighbors must form a clique, which the
    standard parent check certifies in linear time. On failure returns a
    :class:`NotChordal` witness instead of an ordering.

    Orientation on ``g`` is ignored; only the undirected structure matters.
    """
    if g.n == 0:
        return Ordering([], "chordal")
    head = _Block()
    for u in sorted(g.ids):
        head.members[u] = None
    block_of = {u: head for u in g.ids}
    visited: set[str] = set()
    visit_order: list[str] = []

    while head is not None:
        u = next(iter(head.members))
        del head.members[u]
        del block_of[u]
        visited.add(u)
        visit_order.append(u)
        if not head.members:
            head = head.next
            if head is not None:
                head.prev = None
        # pull unvisited neighbors to a fresh block just ahead of their own
        moved: dict[int, tuple[_Block, _Block]] = {}
        for v in sorted(g.adj[u]):
            if v in visited:
                continue
            blk = block_of[v]
            key = id(blk)
            if key not in moved:
                front = _Block()
                front.prev = blk.prev
                front.next = blk
                if blk.prev is not None:
                    blk.prev.next = front
                else:
                    head = front
                blk.prev = front
                moved[key] = (blk, front)
            front = moved[key][1]
            del blk.members[v]
            front.members[v] = None
            block_of[v] = front
        for blk, _front in moved.values():
            if not blk.members:
                if blk.prev is not None:
                    blk.prev.next = blk.next
                else:
                    head = blk.next
                if blk.next is not None:
                    blk.next.prev = blk.prev

    candidate = list(reversed(visit_order))
    rank = {u: i for i, u in enumerate(candidate)}
    for u in candidate:
        later = [v for v in g.adj[u] if rank[v] > rank[u]]
        if len(later) < 2:
            continue
        parent = min(later, key=lambda v: rank[v])
        for v in later:
            if v is not parent and parent not in g.adj[v]:
                return NotChordal(node=u, a=parent, b=v)
    return Ordering(candidate, "chordal")
