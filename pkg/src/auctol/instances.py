"""Instance files and generators.

An instance bundles everything one winner-determination run needs: bids,
an optional object graph, optional budget constraints, and an ordering
recipe. The on-disk form is canonical JSON (format tag ``auctol/1``): keys
sorted, semantically-free arrays sorted, two-space indent, newline
terminated, so generated files are stable golden-test artifacts and
``save(load(save(x)))`` is a fixpoint.

Generators cover the graph families the solvers are designed around:
intervals (chordal), interval selection with 1-per-bidder groups, subtrees
of a random tree (chordal), subgraphs of k-dimensional grids, the
worst-case star that makes the approximation ratio tight, and a wrapper
that decorates any base family with budget constraints. All randomness
flows from :class:`auctol.rng.SplitMix64` streams, one per generator
stage, so every instance is a pure function of (parameters, seed).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .budgets import ConstraintSet, Group
from .errors import NotChordalError, SchemaError, ValidationError
from .graphs import (
    Bid,
    BidGraph,
    ObjectGraph,
    Ordering,
    beta_bound_frontier,
    build_bid_graph,
    orient,
    validate_germane,
)
from .orderings import (
    NotChordal,
    TreeDecomposition,
    decreasing_weight_ordering,
    grid_ordering,
    lexbfs_peo,
    planted_optimal_ordering,
    tree_decomposition_ordering,
    validate_tree_decomposition,
)
from .rng import SplitMix64

FORMAT_TAG = "auctol/1"

ORDERING_METHODS = (
    "chordal",
    "tree-decomposition",
    "grid",
    "decreasing-weight",
    "explicit",
    "planted-optimal",
)


@dataclass
class OrderingSpec:
    method: str
    permutation: list[str] | None = None
    coords: dict[str, tuple[int, ...]] | None = None
    tree_decomposition: TreeDecomposition | None = None
    independent_set: frozenset[str] | None = None
    frontier_sets: dict[str, frozenset[str]] | None = None
    beta_bound: int | None = None


@dataclass
class Instance:
    bids: list[Bid]
    object_graph: ObjectGraph | None = None
    constraints: ConstraintSet | None = None
    ordering_spec: OrderingSpec | None = None
    metadata: dict = field(default_factory=dict)


# ---------------------------------------------------------------------------
# validation


def validate_instance(inst: Instance) -> None:
    """Full semantic validation; raises ValidationError on the first problem."""
    ids = set()
    for b in inst.bids:
        if b.id in ids:
            raise ValidationError(f"duplicate bid id {b.id!r}")
        ids.add(b.id)
    if inst.object_graph is not None:
        bad = validate_germane(inst.object_graph, inst.bids)
        if bad:
            raise ValidationError(f"bid {bad[0]!r} is not germane (object set disconnected)")
    if inst.constraints is not None:
        cs = inst.constraints
        for grp in cs.groups:
            for u in sorted(grp.members):
                if u not in ids:
                    raise ValidationError(f"group {grp.label!r} member {u!r} is not a bid")
        if cs.kind in ("unweighted", "weighted"):
            owner: dict[str, str] = {}
            for grp in cs.groups:
                for u in grp.members:
                    if u in owner:
                        raise ValidationError(
                            f"bid {u!r} is in groups {owner[u]!r} and {grp.label!r}; "
                            f"{cs.kind} constraints must partition the bids"
                        )
                    owner[u] = grp.label
            for b in inst.bids:
                if b.id not in owner:
                    raise ValidationError(f"bid {b.id!r} belongs to no constraint group")
                if b.group is not None and b.group != owner[b.id]:
                    raise ValidationError(
                        f"bid {b.id!r} declares group {b.group!r} but is a member of {owner[b.id]!r}"
                    )
    spec = inst.ordering_spec
    if spec is None:
        return
    if spec.method not in ORDERING_METHODS:
        raise ValidationError(f"unknown ordering method {spec.method!r}")
    if spec.method == "explicit":
        if spec.permutation is None:
            raise ValidationError("explicit ordering requires a permutation")
        if sorted(spec.permutation) != sorted(ids):
            raise ValidationError("explicit permutation must be a bijection over the bid ids")
    if spec.method == "grid":
        if spec.coords is None:
            raise ValidationError("grid ordering requires coordinates")
        if set(spec.coords) != ids:
            raise ValidationError("grid coordinates must cover exactly the bid ids")
    if spec.method == "planted-optimal":
        if spec.independent_set is None:
            raise ValidationError("planted-optimal ordering requires an independent set")
        for u in sorted(spec.independent_set):
            if u not in ids:
                raise ValidationError(f"planted set member {u!r} is not a bid")
    if spec.method == "tree-decomposition":
        if spec.tree_decomposition is None:
            raise ValidationError("tree-decomposition ordering requires an embedded decomposition")
        if inst.object_graph is not None:
            problems = validate_tree_decomposition(inst.object_graph, spec.tree_decomposition)
            if problems:
                raise ValidationError("invalid tree decomposition: " + "; ".join(problems))
    if spec.frontier_sets is not None and set(spec.frontier_sets) != ids:
        raise ValidationError("frontier sets must cover exactly the bid ids")
    if spec.beta_bound is not None and spec.beta_bound < 1:
        raise ValidationError("beta bound must be >= 1")


# ---------------------------------------------------------------------------
# JSON encoding


def _canonical(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def instance_to_obj(inst: Instance) -> dict:
    obj: dict = {"format": FORMAT_TAG}
    if inst.metadata:
        obj["metadata"] = dict(inst.metadata)
    if inst.object_graph is not None:
        og = inst.object_graph
        obj["objects"] = sorted(og.objects)
        obj["object_edges"] = sorted([list(e) for e in og.edges])
    bids = []
    for b in sorted(inst.bids, key=lambda x: x.id):
        entry = {"id": b.id, "objects": sorted(b.objects), "price": b.price}
        if b.group is not None:
            entry["group"] = b.group
        bids.append(entry)
    obj["bids"] = bids
    if inst.constraints is not None:
        cs = inst.constraints
        key = "b" if cs.kind == "weighted" else "k"
        obj["constraints"] = {
            "kind": cs.kind,
            "groups": [
                {"label": grp.label, "members": sorted(grp.members), key: grp.limit}
                for grp in sorted(cs.groups, key=lambda gr: gr.label)
            ],
        }
    if inst.ordering_spec is not None:
        spec = inst.ordering_spec
        sobj: dict = {"method": spec.method}
        if spec.permutation is not None:
            sobj["permutation"] = list(spec.permutation)
        if spec.coords is not None:
            sobj["coords"] = {u: list(v) for u, v in spec.coords.items()}
        if spec.tree_decomposition is not None:
            td = spec.tree_decomposition
            tobj = {
                "tree_nodes": sorted(td.tree_nodes),
                "tree_edges": sorted([sorted(e) for e in td.tree_edges]),
                "bags": {t: sorted(bag) for t, bag in td.bags.items()},
            }
            if td.root is not None:
                tobj["root"] = td.root
            sobj["tree_decomposition"] = tobj
        if spec.independent_set is not None:
            sobj["independent_set"] = sorted(spec.independent_set)
        if spec.frontier_sets is not None:
            sobj["frontier_sets"] = {u: sorted(s) for u, s in spec.frontier_sets.items()}
        if spec.beta_bound is not None:
            sobj["beta_bound"] = spec.beta_bound
        obj["ordering_spec"] = sobj
    return obj


def dumps_instance(inst: Instance) -> str:
    validate_instance(inst)
    return _canonical(instance_to_obj(inst))


def save_instance(inst: Instance, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_instance(inst))


def _expect(cond: bool, pointer: str, message: str) -> None:
    if not cond:
        raise SchemaError(pointer, message)


def _expect_int(value, pointer: str) -> int:
    _expect(isinstance(value, int) and not isinstance(value, bool), pointer, "expected an integer")
    return value


def _expect_str(value, pointer: str) -> str:
    _expect(isinstance(value, str), pointer, "expected a string")
    return value


def _expect_list(value, pointer: str) -> list:
    _expect(isinstance(value, list), pointer, "expected an array")
    return value


def _expect_obj(value, pointer: str) -> dict:
    _expect(isinstance(value, dict), pointer, "expected an object")
    return value


def obj_to_instance(obj: dict) -> Instance:
    _expect_obj(obj, "")
    _expect(obj.get("format") == FORMAT_TAG, "/format", f"expected {FORMAT_TAG!r}")
    known = {"format", "metadata", "objects", "object_edges", "bids", "constraints", "ordering_spec"}
    for key in obj:
        _expect(key in known, f"/{key}", "unknown key")

    metadata = {}
    if "metadata" in obj:
        metadata = _expect_obj(obj["metadata"], "/metadata")
        for k, v in metadata.items():
            _expect(
                isinstance(v, (str, int, float)) and not isinstance(v, bool),
                f"/metadata/{k}",
                "metadata values must be scalars",
            )

    og = None
    _expect(
        ("objects" in obj) == ("object_edges" in obj),
        "/objects",
        "objects and object_edges must appear together",
    )
    if "objects" in obj:
        objects = [_expect_str(o, f"/objects/{i}") for i, o in enumerate(_expect_list(obj["objects"], "/objects"))]
        edges = []
        for i, e in enumerate(_expect_list(obj["object_edges"], "/object_edges")):
            pair = _expect_list(e, f"/object_edges/{i}")
            _expect(len(pair) == 2, f"/object_edges/{i}", "edge must have two endpoints")
            edges.append((_expect_str(pair[0], f"/object_edges/{i}/0"), _expect_str(pair[1], f"/object_edges/{i}/1")))
        try:
            og = ObjectGraph(objects, edges)
        except ValidationError as exc:
            raise SchemaError("/object_edges", str(exc)) from exc

    bids = []
    ids = set()
    for i, entry in enumerate(_expect_list(obj.get("bids"), "/bids")):
        _expect_obj(entry, f"/bids/{i}")
        for key in entry:
            _expect(key in {"id", "objects", "price", "group"}, f"/bids/{i}/{key}", "unknown key")
        bid_id = _expect_str(entry.get("id"), f"/bids/{i}/id")
        _expect(bid_id not in ids, f"/bids/{i}/id", f"duplicate bid id {bid_id!r}")
        ids.add(bid_id)
        objs = [_expect_str(o, f"/bids/{i}/objects/{j}") for j, o in enumerate(_expect_list(entry.get("objects"), f"/bids/{i}/objects"))]
        _expect(objs, f"/bids/{i}/objects", "object set must be non-empty")
        price = _expect_int(entry.get("price"), f"/bids/{i}/price")
        _expect(price >= 0, f"/bids/{i}/price", "price must be >= 0")
        group = entry.get("group")
        if group is not None:
            group = _expect_str(group, f"/bids/{i}/group")
        if og is not None:
            for o in objs:
                _expect(o in og, f"/bids/{i}/objects", f"undeclared object {o!r}")
        bids.append(Bid(bid_id, frozenset(objs), price, group))

    constraints = None
    if "constraints" in obj:
        cobj = _expect_obj(obj["constraints"], "/constraints")
        kind = _expect_str(cobj.get("kind"), "/constraints/kind")
        _expect(kind in ("unweighted", "overlapping", "weighted"), "/constraints/kind", f"unknown kind {kind!r}")
        limit_key = "b" if kind == "weighted" else "k"
        groups = []
        for i, gobj in enumerate(_expect_list(cobj.get("groups"), "/constraints/groups")):
            _expect_obj(gobj, f"/constraints/groups/{i}")
            label = _expect_str(gobj.get("label"), f"/constraints/groups/{i}/label")
            members = [
                _expect_str(m, f"/constraints/groups/{i}/members/{j}")
                for j, m in enumerate(_expect_list(gobj.get("members"), f"/constraints/groups/{i}/members"))
            ]
            for j, m in enumerate(members):
                _expect(m in ids, f"/constraints/groups/{i}/members/{j}", f"unknown bid {m!r}")
            _expect(limit_key in gobj, f"/constraints/groups/{i}", f"missing {limit_key!r} limit")
            limit = _expect_int(gobj[limit_key], f"/constraints/groups/{i}/{limit_key}")
            _expect(limit >= 1, f"/constraints/groups/{i}/{limit_key}", "limit must be >= 1")
            groups.append(Group(label, frozenset(members), limit))
        try:
            constraints = ConstraintSet(kind, groups)
        except ValidationError as exc:
            raise SchemaError("/constraints", str(exc)) from exc

    spec = None
    if "ordering_spec" in obj:
        sobj = _expect_obj(obj["ordering_spec"], "/ordering_spec")
        method = _expect_str(sobj.get("method"), "/ordering_spec/method")
        _expect(method in ORDERING_METHODS, "/ordering_spec/method", f"unknown method {method!r}")
        permutation = None
        if "permutation" in sobj:
            permutation = [
                _expect_str(u, f"/ordering_spec/permutation/{i}")
                for i, u in enumerate(_expect_list(sobj["permutation"], "/ordering_spec/permutation"))
            ]
        coords = None
        if "coords" in sobj:
            cmap = _expect_obj(sobj["coords"], "/ordering_spec/coords")
            coords = {}
            for u, vec in cmap.items():
                _expect(u in ids, f"/ordering_spec/coords/{u}", f"unknown bid {u!r}")
                lst = _expect_list(vec, f"/ordering_spec/coords/{u}")
                coords[u] = tuple(_expect_int(x, f"/ordering_spec/coords/{u}/{i}") for i, x in enumerate(lst))
        td = None
        if "tree_decomposition" in sobj:
            tobj = _expect_obj(sobj["tree_decomposition"], "/ordering_spec/tree_decomposition")
            tnodes = [
                _expect_str(t, f"/ordering_spec/tree_decomposition/tree_nodes/{i}")
                for i, t in enumerate(_expect_list(tobj.get("tree_nodes"), "/ordering_spec/tree_decomposition/tree_nodes"))
            ]
            tedges = []
            for i, e in enumerate(_expect_list(tobj.get("tree_edges"), "/ordering_spec/tree_decomposition/tree_edges")):
                pair = _expect_list(e, f"/ordering_spec/tree_decomposition/tree_edges/{i}")
                _expect(len(pair) == 2, f"/ordering_spec/tree_decomposition/tree_edges/{i}", "edge must have two endpoints")
                tedges.append((pair[0], pair[1]))
            bags_obj = _expect_obj(tobj.get("bags"), "/ordering_spec/tree_decomposition/bags")
            bags = {
                t: frozenset(
                    _expect_str(o, f"/ordering_spec/tree_decomposition/bags/{t}/{i}")
                    for i, o in enumerate(_expect_list(bag, f"/ordering_spec/tree_decomposition/bags/{t}"))
                )
                for t, bag in bags_obj.items()
            }
            root = tobj.get("root")
            td = TreeDecomposition(tnodes, tedges, bags, root)
        independent_set = None
        if "independent_set" in sobj:
            independent_set = frozenset(
                _expect_str(u, f"/ordering_spec/independent_set/{i}")
                for i, u in enumerate(_expect_list(sobj["independent_set"], "/ordering_spec/independent_set"))
            )
        frontier_sets = None
        if "frontier_sets" in sobj:
            fobj = _expect_obj(sobj["frontier_sets"], "/ordering_spec/frontier_sets")
            frontier_sets = {
                u: frozenset(
                    _expect_str(o, f"/ordering_spec/frontier_sets/{u}/{i}")
                    for i, o in enumerate(_expect_list(s, f"/ordering_spec/frontier_sets/{u}"))
                )
                for u, s in fobj.items()
            }
        beta_bound = None
        if "beta_bound" in sobj:
            beta_bound = _expect_int(sobj["beta_bound"], "/ordering_spec/beta_bound")
        spec = OrderingSpec(method, permutation, coords, td, independent_set, frontier_sets, beta_bound)

    inst = Instance(bids, og, constraints, spec, metadata)
    try:
        validate_instance(inst)
    except SchemaError:
        raise
    except ValidationError as exc:
        raise SchemaError("", str(exc)) from exc
    return inst


def loads_instance(text: str) -> Instance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("", f"not valid JSON: {exc}") from exc
    return obj_to_instance(obj)


def load_instance(path) -> Instance:
    with open(path, encoding="utf-8") as fh:
        return loads_instance(fh.read())


def dumps_solution(sol) -> str:
    return _canonical(sol.to_json_obj())


# ---------------------------------------------------------------------------
# pipeline helpers


def bid_graph(inst: Instance) -> BidGraph:
    return build_bid_graph(inst.bids)


def ordering_from_spec(inst: Instance, g: BidGraph) -> Ordering:
    """Construct the ordering an instance declares; defaults to decreasing
    weight when no spec is present. Raises NotChordalError when a chordal
    ordering was demanded but recognition fails."""
    spec = inst.ordering_spec
    if spec is None:
        return decreasing_weight_ordering(g)
    if spec.method == "chordal":
        result = lexbfs_peo(g)
        if isinstance(result, NotChordal):
            raise NotChordalError((result.node, result.a, result.b))
        return result
    if spec.method == "tree-decomposition":
        return tree_decomposition_ordering(spec.tree_decomposition, inst.bids, inst.object_graph)
    if spec.method == "grid":
        return grid_ordering(spec.coords)
    if spec.method == "decreasing-weight":
        return decreasing_weight_ordering(g)
    if spec.method == "planted-optimal":
        return planted_optimal_ordering(g, spec.independent_set)
    ordering = Ordering(list(spec.permutation), "explicit", spec.frontier_sets)
    return ordering


def oriented_graph(inst: Instance) -> BidGraph:
    g = bid_graph(inst)
    return orient(g, ordering_from_spec(inst, g))


def beta_bound_info(inst: Instance, ordering: Ordering, g: BidGraph) -> tuple[int | None, str | None]:
    """Best beta bound certifiable for this instance and ordering."""
    if ordering.provenance == "chordal":
        return 1, "perfect-elimination"
    if ordering.frontier_sets is not None:
        return beta_bound_frontier(ordering), "frontier-bound"
    if ordering.provenance == "grid" and inst.ordering_spec and inst.ordering_spec.coords:
        coords = inst.ordering_spec.coords
        k = len(next(iter(coords.values())))
        for u in g.ids:
            cu = coords[u]
            for v in g.adj[u]:
                if sum(abs(a - b) for a, b in zip(cu, coords[v])) != 1:
                    return None, None
        return k, "grid-dimension"
    return None, None


# ---------------------------------------------------------------------------
# generators


def _pad(n: int) -> int:
    return len(str(max(n - 1, 1)))


def _interval_bids(n: int, weight_range: tuple[int, int], rng: SplitMix64):
    r_pos, r_len, r_w = rng.split(), rng.split(), rng.split()
    span = max(4, 2 * n)
    wmin, wmax = weight_range
    pw = len(str(span + 4))
    pad = _pad(n)
    bids = []
    hi = 0
    for i in range(n):
        a = r_pos.randrange(span)
        length = 1 + r_len.randrange(4)
        pts = [f"p{j:0{pw}d}" for j in range(a, a + length + 1)]
        hi = max(hi, a + length)
        bids.append(Bid(f"b{i:0{pad}d}", frozenset(pts), r_w.randint(wmin, wmax)))
    return bids, hi, pw


def _interval_object_graph(hi: int, pw: int) -> ObjectGraph:
    objects = [f"p{j:0{pw}d}" for j in range(hi + 1)]
    edges = [(objects[j], objects[j + 1]) for j in range(hi)]
    return ObjectGraph(objects, edges)


def gen_interval(
    n: int,
    weight_range: tuple[int, int] = (1, 1000),
    seed: int = 0,
    include_object_graph: bool = True,
) -> Instance:
    """Random integer intervals over a line of points; chordal ordering."""
    if n < 1:
        raise ValidationError("n must be >= 1")
    rng = SplitMix64(seed)
    bids, hi, pw = _interval_bids(n, weight_range, rng)
    og = _interval_object_graph(hi, pw) if include_object_graph else None
    inst = Instance(
        bids,
        og,
        None,
        OrderingSpec("chordal"),
        {"family": "interval", "seed": seed, "n": n},
    )
    validate_instance(inst)
    return inst


def gen_interval_selection(
    n_groups: int,
    per_group: int,
    seed: int = 0,
    weight_range: tuple[int, int] = (1, 1000),
) -> Instance:
    """Interval bids plus a pick-at-most-one group per bidder.

    The conflict structure is an interval graph overlaid with one clique per
    group, so the composed beta bound is 1 + 1 = 2; solving through the
    k-of-group path instead claims beta + 1 = 2 as well.
    """
    if n_groups < 1 or per_group < 1:
        raise ValidationError("n_groups and per_group must be >= 1")
    rng = SplitMix64(seed)
    n = n_groups * per_group
    bids, hi, pw = _interval_bids(n, weight_range, rng)
    gpad = _pad(n_groups)
    groups = []
    labeled = []
    for j in range(n_groups):
        label = f"g{j:0{gpad}d}"
        members = [b.id for b in bids[j * per_group : (j + 1) * per_group]]
        groups.append(Group(label, frozenset(members), 1))
        labeled.extend(Bid(b.id, b.objects, b.price, label) for b in bids[j * per_group : (j + 1) * per_group])
    inst = Instance(
        labeled,
        _interval_object_graph(hi, pw),
        ConstraintSet("unweighted", groups),
        OrderingSpec("chordal"),
        {"family": "interval-selection", "seed": seed, "n_groups": n_groups, "per_group": per_group},
    )
    validate_instance(inst)
    return inst


def gen_subtrees(
    tree_size: int,
    n_bids: int,
    seed: int = 0,
    weight_range: tuple[int, int] = (1, 1000),
) -> Instance:
    """Bids are random connected subtrees of a random tree; chordal."""
    if tree_size < 1 or n_bids < 1:
        raise ValidationError("tree_size and n_bids must be >= 1")
    rng = SplitMix64(seed)
    r_tree, r_start, r_size, r_grow, r_w = (rng.split() for _ in range(5))
    pad = _pad(tree_size)
    nodes = [f"t{i:0{pad}d}" for i in range(tree_size)]
    edges = []
    adj: dict[str, list[str]] = {t: [] for t in nodes}
    for i in range(1, tree_size):
        p = r_tree.randrange(i)
        edges.append((nodes[p], nodes[i]))
        adj[nodes[p]].append(nodes[i])
        adj[nodes[i]].append(nodes[p])
    og = ObjectGraph(nodes, edges)

    wmin, wmax = weight_range
    bpad = _pad(n_bids)
    bids = []
    for i in range(n_bids):
        start = nodes[r_start.randrange(tree_size)]
        target = 1 + r_size.randrange(4)
        chosen = [start]
        inside = {start}
        candidates = sorted(adj[start])
        while len(chosen) < target and candidates:
            pick = candidates.pop(r_grow.randrange(len(candidates)))
            if pick in inside:
                continue
            chosen.append(pick)
            inside.add(pick)
            for nb in sorted(adj[pick]):
                if nb not in inside and nb not in candidates:
                    candidates.append(nb)
        bids.append(Bid(f"b{i:0{bpad}d}", frozenset(chosen), r_w.randint(wmin, wmax)))
    inst = Instance(
        bids,
        og,
        None,
        OrderingSpec("chordal"),
        {"family": "subtrees", "seed": seed, "tree_size": tree_size, "n_bids": n_bids},
    )
    validate_instance(inst)
    return inst


def gen_grid(
    dims: tuple[int, ...] = (4, 4),
    density_milli: int = 1000,
    weight_range: tuple[int, int] = (1, 1000),
    seed: int = 0,
) -> Instance:
    """One bid per surviving grid point; conflicts along grid edges.

    Adjacent points share a synthetic edge object, so the conflict graph is
    exactly the induced grid subgraph and the coordinate-sum ordering
    certifies beta <= len(dims).
    """
    if not dims or any(d < 1 for d in dims):
        raise ValidationError("dims must be a non-empty tuple of positive sizes")
    if not 0 <= density_milli <= 1000:
        raise ValidationError("density_milli must be within [0, 1000]")
    rng = SplitMix64(seed)
    r_keep, r_w = rng.split(), rng.split()
    wmin, wmax = weight_range

    points = [()]
    for d in dims:
        points = [p + (x,) for p in points for x in range(d)]
    keep = [p for p in points if r_keep.randrange(1000) < density_milli]
    kept = set(keep)

    def pname(p):
        return "p" + "_".join(str(x) for x in p)

    def ename(p, q):
        a, b = sorted([p, q])
        return "e" + "_".join(str(x) for x in a) + "__" + "_".join(str(x) for x in b)

    objects = [pname(p) for p in keep]
    og_edges = []
    edge_objs = []
    incident: dict[tuple, list[str]] = {p: [] for p in keep}
    for p in keep:
        for axis in range(len(dims)):
            q = p[:axis] + (p[axis] + 1,) + p[axis + 1 :]
            if q in kept:
                e = ename(p, q)
                edge_objs.append(e)
                incident[p].append(e)
                incident[q].append(e)
                og_edges.append((pname(p), e))
                og_edges.append((pname(q), e))
    og = ObjectGraph(objects + edge_objs, og_edges)

    bids = []
    coords = {}
    for p in keep:
        bid_id = "b" + "_".join(str(x) for x in p)
        bids.append(Bid(bid_id, frozenset([pname(p)] + incident[p]), r_w.randint(wmin, wmax)))
        coords[bid_id] = p
    if not bids:
        raise ValidationError("density left no grid points; lower dims or raise density")
    inst = Instance(
        bids,
        og,
        None,
        OrderingSpec("grid", coords=coords),
        {
            "family": "grid",
            "seed": seed,
            "dims": "x".join(str(d) for d in dims),
            "density_milli": density_milli,
        },
    )
    validate_instance(inst)
    return inst


def gen_tight(beta: int, epsilon_milli: int, seed: int = 0) -> Instance:
    """Worst-case star: a hub of weight 1000 ordered before ``beta``
    pairwise-independent successors of weight 1000 - epsilon each.

    The solver takes only the hub, so the observed ratio is exactly
    beta * (1000 - epsilon) / 1000.
    """
    if beta < 1:
        raise ValidationError("beta must be >= 1")
    if not 1 <= epsilon_milli <= 999:
        raise ValidationError("epsilon_milli must be within [1, 999]")
    pad = _pad(beta)
    centers = [f"c{i:0{pad}d}" for i in range(beta)]
    og = ObjectGraph(centers, [(centers[i], centers[i + 1]) for i in range(beta - 1)])
    bids = [Bid("a_hub", frozenset(centers), 1000)]
    for i in range(beta):
        bids.append(Bid(f"s{i:0{pad}d}", frozenset([centers[i]]), 1000 - epsilon_milli))
    inst = Instance(
        bids,
        og,
        None,
        OrderingSpec("explicit", permutation=[b.id for b in bids]),
        {"family": "tight", "seed": seed, "beta": beta, "epsilon_milli": epsilon_milli},
    )
    validate_instance(inst)
    return inst


_BASE_GENERATORS = {
    "interval": lambda params, seed: gen_interval(
        params.get("n", 12),
        params.get("weight_range", (1, 1000)),
        seed,
        params.get("include_object_graph", True),
    ),
    "subtrees": lambda params, seed: gen_subtrees(
        params.get("tree_size", 10),
        params.get("n_bids", 12),
        seed,
        params.get("weight_range", (1, 1000)),
    ),
    "grid": lambda params, seed: gen_grid(
        params.get("dims", (4, 4)),
        params.get("density_milli", 1000),
        params.get("weight_range", (1, 1000)),
        seed,
    ),
}


def gen_budget(
    base_family: str,
    constraint_kind: str,
    params: dict | None = None,
    seed: int = 0,
) -> Instance:
    """Wrap a base family with randomly assigned budget constraints.

    ``params`` are forwarded to the base generator plus: ``group_size``
    (average bids per group), ``k_max`` (count limits are 1..k_max),
    ``t`` (overlapping: groups per bid is 1..t).
    """
    params = dict(params or {})
    if base_family not in _BASE_GENERATORS:
        raise ValidationError(f"unknown base family {base_family!r}")
    if constraint_kind not in ("unweighted", "overlapping", "weighted"):
        raise ValidationError(f"unknown constraint kind {constraint_kind!r}")
    master = SplitMix64(seed)
    base_seed = master.next_u64()
    base = _BASE_GENERATORS[base_family](params, base_seed)

    group_size = max(1, params.get("group_size", 3))
    k_max = max(1, params.get("k_max", 2))
    t = max(1, params.get("t", 2))
    r_assign, r_limit = master.split(), master.split()

    ids = sorted(b.id for b in base.bids)
    n = len(ids)
    weights = {b.id: b.price for b in base.bids}

    if constraint_kind in ("unweighted", "weighted"):
        shuffled = list(ids)
        r_assign.shuffle(shuffled)
        chunks = [shuffled[i : i + group_size] for i in range(0, n, group_size)]
        gpad = _pad(len(chunks))
        groups = []
        label_of: dict[str, str] = {}
        for j, chunk in enumerate(chunks):
            label = f"g{j:0{gpad}d}"
            if constraint_kind == "unweighted":
                limit = 1 + r_limit.randrange(min(k_max, len(chunk)))
            else:
                w_max = max(weights[u] for u in chunk)
                w_sum = sum(weights[u] for u in chunk)
                limit = r_limit.randint(w_max, w_max + w_sum // 2)
            groups.append(Group(label, frozenset(chunk), limit))
            for u in chunk:
                label_of[u] = label
        bids = [Bid(b.id, b.objects, b.price, label_of[b.id]) for b in base.bids]
        cs = ConstraintSet(constraint_kind, groups)
    else:
        n_groups = max(1, (n + group_size - 1) // group_size)
        gpad = _pad(n_groups)
        member_lists: list[list[str]] = [[] for _ in range(n_groups)]
        for u in ids:
            cnt = 1 + r_assign.randrange(t)
            for gi in r_assign.sample_indices(n_groups, min(cnt, n_groups)):
                member_lists[gi].append(u)
        groups = []
        for j, members in enumerate(member_lists):
            if not members:
                continue
            limit = 1 + r_limit.randrange(k_max)
            groups.append(Group(f"g{j:0{gpad}d}", frozenset(members), limit))
        bids = list(base.bids)
        cs = ConstraintSet("overlapping", groups)

    metadata = dict(base.metadata)
    metadata.update(
        {
            "family": f"budget-{constraint_kind}",
            "base_family": base_family,
            "seed": seed,
            "group_size": group_size,
        }
    )
    inst = Instance(bids, base.object_graph, cs, base.ordering_spec, metadata)
    validate_instance(inst)
    return inst
