"""Budget-constrained winner determination.

Three constraint kinds over groups of bids:

* ``unweighted``: groups partition the bids; at most k bids win per group.
  The forward pass extends the opportunity cost with a group charge: a
  1/k-scaled sum of the positive values already seen in the bid's group.
  Approximation ratio beta + 1.
* ``overlapping``: groups may overlap, each bid in at most t of them; the
  group charge is applied once per containing group. Ratio beta + t.
* ``weighted``: per-group money budgets b. Bids are split into heavy
  (weight > b/2) and light (weight <= b/2); the heavy side reduces to a
  1-of-group unweighted run, the light side uses a multiplicative group
  discount, and the better of the two solutions is returned. Ratio
  2*beta + 3.

The unweighted and overlapping passes use exact rational arithmetic (the
only divisor is k), with a pure-integer fast path when every k is 1. The
light pass is the single place fractions are inherent, so it runs in double
precision with a deterministic positivity threshold; a direct quadratic
update mode ships alongside the lazy linear-time one as a cross-check.
"""

from __future__ import annotations

from array import array
from dataclasses import dataclass
from fractions import Fraction
from itertools import compress

from .errors import CapacityError, ValidationError
from .graphs import BidGraph, certified_bound
from .solvers import Certificate, Solution, ValueTable, _compiled, assert_independent

KINDS = ("unweighted", "overlapping", "weighted")


@dataclass(frozen=True)
class Group:
    label: str
    members: frozenset[str]
    limit: int  # k (a count) or b (minor currency units), depending on kind

    def __post_init__(self):
        object.__setattr__(self, "members", frozenset(self.members))
        if not self.members:
            raise ValidationError(f"group {self.label!r} has no members")
        if not isinstance(self.limit, int) or isinstance(self.limit, bool) or self.limit < 1:
            raise ValidationError(f"group {self.label!r}: limit must be an integer >= 1")


@dataclass
class ConstraintSet:
    kind: str
    groups: list[Group]

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValidationError(f"unknown constraint kind {self.kind!r}")
        labels = [g.label for g in self.groups]
        if len(set(labels)) != len(labels):
            raise ValidationError("group labels must be unique")

    def validate_for(self, g: BidGraph) -> None:
        """Check membership shape against a graph's node set."""
        nodes = set(g.ids)
        for grp in self.groups:
            missing = grp.members - nodes
            if missing:
                raise ValidationError(
                    f"group {grp.label!r} member {min(missing)!r} is not a bid node"
                )
        if self.kind in ("unweighted", "weighted"):
            count: dict[str, int] = {}
            for grp in self.groups:
                for u in grp.members:
                    count[u] = count.get(u, 0) + 1
            for u in g.ids:
                if count.get(u, 0) != 1:
                    raise ValidationError(
                        f"{self.kind} constraints must partition the bids; "
                        f"bid {u!r} is in {count.get(u, 0)} groups"
                    )

    def overlap(self) -> int:
        """t: the maximum number of groups any single bid belongs to."""
        count: dict[str, int] = {}
        for grp in self.groups:
            for u in grp.members:
                count[u] = count.get(u, 0) + 1
        return max(count.values(), default=1)


def _group_index(cs: ConstraintSet, order: list[str]):
    """Per-node group memberships in index space.

    Returns (groups_of[i] -> list of group indices, k[gi], members_by_rank[gi]).
    """
    pos = {u: i for i, u in enumerate(order)}
    k = [grp.limit for grp in cs.groups]
    members_by_rank: list[list[int]] = []
    groups_of: list[list[int]] = [[] for _ in order]
    for gi, grp in enumerate(cs.groups):
        ranks = sorted(pos[u] for u in grp.members if u in pos)
        members_by_rank.append(ranks)
        for i in ranks:
            groups_of[i].append(gi)
    return groups_of, k, members_by_rank


def _partition_index(cs: ConstraintSet, pos: dict[str, int]) -> tuple[list[int], list[int]]:
    """Partition case: one flat group index per node plus the limits.

    Validates membership and the partition property while filling, so the
    hot solvers do one pass of id lookups instead of several.
    """
    gi_of = [-1] * len(pos)
    for gi, grp in enumerate(cs.groups):
        for u in grp.members:
            i = pos.get(u)
            if i is None:
                raise ValidationError(f"group {grp.label!r} member {u!r} is not a bid node")
            if gi_of[i] != -1:
                raise ValidationError(
                    f"{cs.kind} constraints must partition the bids; bid {u!r} is in "
                    f"groups {cs.groups[gi_of[i]].label!r} and {grp.label!r}"
                )
            gi_of[i] = gi
    if -1 in gi_of:
        u = next(u for u, i in pos.items() if gi_of[i] == -1)
        raise ValidationError(
            f"{cs.kind} constraints must partition the bids; bid {u!r} is in 0 groups"
        )
    return array("q", gi_of), [grp.limit for grp in cs.groups]


def _groups_csr(cs: ConstraintSet, pos: dict[str, int]):
    """Flat per-node group membership: node i's groups are
    gidx[gptr[i]:gptr[i+1]], listed in ascending group index. Also returns
    the limits and the realized overlap t (max groups per node)."""
    n = len(pos)
    counts = [0] * (n + 1)
    for grp in cs.groups:
        for u in grp.members:
            i = pos.get(u)
            if i is None:
                raise ValidationError(f"group {grp.label!r} member {u!r} is not a bid node")
            counts[i + 1] += 1
    t = max(counts[1:], default=0)
    for i in range(n):
        counts[i + 1] += counts[i]
    gptr = counts
    gidx = [0] * gptr[n]
    fill = list(gptr[:n])
    for gi, grp in enumerate(cs.groups):
        for u in grp.members:
            i = pos[u]
            gidx[fill[i]] = gi
            fill[i] += 1
    return array("q", gptr), array("q", gidx), [grp.limit for grp in cs.groups], max(t, 1)


def solve_unweighted(g: BidGraph, cs: ConstraintSet) -> tuple[Solution, ValueTable]:
    """k-of-group winner determination, forward one-pass form.

    Value of u = weight(u) minus predecessor charges minus (1/k) times the
    sum of positive values already seen in u's group; the reverse pass
    accepts positive-value nodes while independence and the group count
    allow. Group sums are kept in running accumulators, so the pass stays
    linear. Arithmetic is exact: integers when every k is 1, otherwise
    rationals.
    """
    if cs.kind != "unweighted":
        raise ValidationError(f"expected unweighted constraints, got {cs.kind!r}")
    c = _compiled(g)
    order, w = c.order, c.w
    pred_ptr, pred_idx = c.pred_ptr, c.pred_idx
    succ_ptr, succ_idx = c.succ_ptr, c.succ_idx
    n = len(order)
    gi_of, k = c.cached(cs, lambda: _partition_index(cs, c.pos))

    exact_ints = all(x == 1 for x in k)
    zero = 0 if exact_ints else Fraction(0)
    delta = [zero] * len(cs.groups)
    val: list = [zero] * n
    for i in range(n):
        s = zero
        for j in pred_idx[pred_ptr[i] : pred_ptr[i + 1]]:
            vj = val[j]
            if vj > 0:
                s += vj
        gi = gi_of[i]
        charge = delta[gi] if exact_ints else delta[gi] / k[gi]
        v = w[i] - s - charge
        val[i] = v
        if v > 0:
            delta[gi] += v

    sel = [False] * n
    used = [0] * len(cs.groups)
    for i in range(n - 1, -1, -1):
        if val[i] > 0 and used[gi_of[i]] < k[gi_of[i]]:
            free = True
            for j in succ_idx[succ_ptr[i] : succ_ptr[i + 1]]:
                if sel[j]:
                    free = False
                    break
            if free:
                sel[i] = True
                used[gi_of[i]] += 1
    c.check_selected_independent(sel)
    chosen = list(compress(order, sel))
    revenue = sum(compress(w, sel))
    sol = Solution(frozenset(chosen), revenue, _budget_certificate(g, "unweighted", lambda b: b + 1))
    return sol, ValueTable(order, val, sel)


def solve_unweighted_lr(g: BidGraph, cs: ConstraintSet) -> Solution:
    """Local-ratio form of the k-of-group solver (slow cross-check).

    Processes nodes in order; each positive current weight is charged in
    full to later neighbors and at 1/k to every later group mate (a later
    neighbor in the same group is charged under both rules). Quadratic in
    group size; exists to confirm the one-pass form.
    """
    if cs.kind != "unweighted":
        raise ValidationError(f"expected unweighted constraints, got {cs.kind!r}")
    cs.validate_for(g)
    c = _compiled(g)
    order, w = c.order, c.w
    succ_ptr, succ_idx = c.succ_ptr, c.succ_idx
    n = len(order)
    groups_of, k, members_by_rank = _group_index(cs, order)
    gi_of = [gs[0] for gs in groups_of]
    grp_pos = [0] * n
    for ranks in members_by_rank:
        for idx, i in enumerate(ranks):
            grp_pos[i] = idx

    cur: list = [Fraction(x) for x in w]
    processed: list[int] = []
    for i in range(n):
        ci = cur[i]
        if ci <= 0:
            continue
        processed.append(i)
        for jj in range(succ_ptr[i], succ_ptr[i + 1]):
            cur[succ_idx[jj]] -= ci
        gi = gi_of[i]
        share = ci / k[gi]
        for j in members_by_rank[gi][grp_pos[i] + 1 :]:
            cur[j] -= share

    sel = [False] * n
    used = [0] * len(cs.groups)
    for i in reversed(processed):
        gi = gi_of[i]
        if used[gi] < k[gi] and not any(sel[succ_idx[jj]] for jj in range(succ_ptr[i], succ_ptr[i + 1])):
            sel[i] = True
            used[gi] += 1
    c.check_selected_independent(sel)
    chosen = [order[i] for i in processed if sel[i]]
    revenue = sum(w[i] for i in processed if sel[i])
    return Solution(frozenset(chosen), revenue, _budget_certificate(g, "unweighted-lr", lambda b: b + 1))


def solve_overlapping(g: BidGraph, cs: ConstraintSet) -> Solution:
    """Overlapping k-of-group winner determination, forward one-pass form.

    Like the partitioned case, but a node pays the 1/k-scaled group charge
    once for every group containing it, and selection must respect all of
    its groups' counts. Runs in O(|V| * t + |E|).
    """
    if cs.kind != "overlapping":
        raise ValidationError(f"expected overlapping constraints, got {cs.kind!r}")
    c = _compiled(g)
    order, w = c.order, c.w
    pred_ptr, pred_idx = c.pred_ptr, c.pred_idx
    succ_ptr, succ_idx = c.succ_ptr, c.succ_idx
    n = len(order)
    gptr, gidx, k, t = c.cached(cs, lambda: _groups_csr(cs, c.pos))

    exact_ints = all(x == 1 for x in k)
    zero = 0 if exact_ints else Fraction(0)
    delta = [zero] * len(cs.groups)
    val: list = [zero] * n
    for i in range(n):
        s = zero
        for j in pred_idx[pred_ptr[i] : pred_ptr[i + 1]]:
            vj = val[j]
            if vj > 0:
                s += vj
        charge = zero
        for gi in gidx[gptr[i] : gptr[i + 1]]:
            charge += delta[gi] if exact_ints else delta[gi] / k[gi]
        v = w[i] - s - charge
        val[i] = v
        if v > 0:
            for gi in gidx[gptr[i] : gptr[i + 1]]:
                delta[gi] += v

    sel = [False] * n
    used = [0] * len(cs.groups)
    for i in range(n - 1, -1, -1):
        if val[i] <= 0:
            continue
        free = True
        for gi in gidx[gptr[i] : gptr[i + 1]]:
            if used[gi] >= k[gi]:
                free = False
                break
        if free:
            for j in succ_idx[succ_ptr[i] : succ_ptr[i + 1]]:
                if sel[j]:
                    free = False
                    break
        if free:
            sel[i] = True
            for gi in gidx[gptr[i] : gptr[i + 1]]:
                used[gi] += 1
    c.check_selected_independent(sel)
    chosen = list(compress(order, sel))
    revenue = sum(compress(w, sel))
    return Solution(frozenset(chosen), revenue, _budget_certificate(g, "overlapping", lambda b: b + t))


def solve_overlapping_lr(g: BidGraph, cs: ConstraintSet) -> Solution:
    """Local-ratio form of the overlapping solver (slow cross-check)."""
    if cs.kind != "overlapping":
        raise ValidationError(f"expected overlapping constraints, got {cs.kind!r}")
    cs.validate_for(g)
    c = _compiled(g)
    order, w = c.order, c.w
    succ_ptr, succ_idx = c.succ_ptr, c.succ_idx
    n = len(order)
    groups_of, k, members_by_rank = _group_index(cs, order)

    cur: list = [Fraction(x) for x in w]
    processed: list[int] = []
    for i in range(n):
        ci = cur[i]
        if ci <= 0:
            continue
        processed.append(i)
        for jj in range(succ_ptr[i], succ_ptr[i + 1]):
            cur[succ_idx[jj]] -= ci
        for gi in groups_of[i]:
            share = ci / k[gi]
            for j in members_by_rank[gi]:
                if j > i:
                    cur[j] -= share

    sel = [False] * n
    used = [0] * len(cs.groups)
    for i in reversed(processed):
        if all(used[gi] < k[gi] for gi in groups_of[i]) and not any(
            sel[succ_idx[jj]] for jj in range(succ_ptr[i], succ_ptr[i + 1])
        ):
            sel[i] = True
            for gi in groups_of[i]:
                used[gi] += 1
    c.check_selected_independent(sel)
    chosen = [order[i] for i in processed if sel[i]]
    revenue = sum(w[i] for i in processed if sel[i])
    t = cs.overlap()
    return Solution(frozenset(chosen), revenue, _budget_certificate(g, "overlapping-lr", lambda b: b + t))


# Light-pass numerics: cur > 1e-9 * b decides "still worth selecting", and a
# group multiplier below 1e-12 is folded back into the stored weights.
POSITIVE_EPS = 1e-9
MULTIPLIER_FLOOR = 1e-12


def solve_light(g: BidGraph, cs: ConstraintSet, mode: str = "lazy") -> tuple[Solution, ValueTable]:
    """Winner determination among light bids (weight <= budget/2).

    Forward pass: when node u is reached with positive current weight c,
    every later neighbor loses c, and u's whole group is then scaled by
    (1 - 2c/b): accepting u eats budget, so group mates lose value in
    proportion to their own size. A later neighbor in u's group is charged
    additively first and scaled with the rest of the group after.

    ``lazy`` keeps one multiplier per group and stores weights divided by
    it, making both charge kinds O(1); the multiplier is folded back into
    the stored weights whenever it underflows. ``direct`` applies the group
    scaling member by member (quadratic) and is the verification mode.

    Reverse pass: accept positive nodes while independence holds and the
    group's accepted original weights stay within b.
    """
    if cs.kind != "weighted":
        raise ValidationError(f"expected weighted constraints, got {cs.kind!r}")
    if mode not in ("lazy", "direct"):
        raise ValidationError(f"unknown light mode {mode!r}")
    cs.validate_for(g)
    c = _compiled(g)
    order, w = c.order, c.w
    succ_ptr, succ_idx = c.succ_ptr, c.succ_idx
    n = len(order)
    groups_of, b, members_by_rank = _group_index(cs, order)
    gi_of = [gs[0] for gs in groups_of]
    for i in range(n):
        if 2 * w[i] > b[gi_of[i]]:
            raise ValidationError(
                f"bid {order[i]!r} is heavy (weight {w[i]} > budget {b[gi_of[i]]}/2)"
            )
    tol = [POSITIVE_EPS * x for x in b]

    vals = [0.0] * n
    processed: list[int] = []
    if mode == "lazy":
        mult = [1.0] * len(cs.groups)
        nw = [float(x) for x in w]  # stored as cur / mult[group]
        for i in range(n):
            gi = gi_of[i]
            ci = nw[i] * mult[gi]
            vals[i] = ci
            if ci <= tol[gi]:
                continue
            processed.append(i)
            for jj in range(succ_ptr[i], succ_ptr[i + 1]):
                j = succ_idx[jj]
                nw[j] -= ci / mult[gi_of[j]]
            mult[gi] *= 1.0 - 2.0 * ci / b[gi]
            if mult[gi] < MULTIPLIER_FLOOR:
                m = mult[gi]
                for j in members_by_rank[gi]:
                    nw[j] *= m
                mult[gi] = 1.0
    else:
        cur = [float(x) for x in w]
        for i in range(n):
            gi = gi_of[i]
            ci = cur[i]
            vals[i] = ci
            if ci <= tol[gi]:
                continue
            processed.append(i)
            for jj in range(succ_ptr[i], succ_ptr[i + 1]):
                cur[succ_idx[jj]] -= ci
            factor = 1.0 - 2.0 * ci / b[gi]
            for j in members_by_rank[gi]:
                if j > i:
                    cur[j] *= factor

    sel = [False] * n
    spent = [0] * len(cs.groups)
    for i in reversed(processed):
        gi = gi_of[i]
        if spent[gi] + w[i] <= b[gi] and not any(
            sel[succ_idx[jj]] for jj in range(succ_ptr[i], succ_ptr[i + 1])
        ):
            sel[i] = True
            spent[gi] += w[i]
    c.check_selected_independent(sel)
    chosen = [order[i] for i in processed if sel[i]]
    revenue = sum(w[i] for i in processed if sel[i])
    sol = Solution(frozenset(chosen), revenue, _budget_certificate(g, "weighted-light", lambda b_: b_ + 2))
    return sol, ValueTable(order, vals, sel)


def solve_weighted(g: BidGraph, cs: ConstraintSet, light_mode: str = "lazy") -> Solution:
    """Money-budget winner determination via the heavy/light split.

    Heavy bids (weight > b/2) are mutually exclusive within a group, so the
    heavy side is the unweighted solver with k=1 per group on the
    heavy-induced subgraph. The light side runs :func:`solve_light`. The
    higher-revenue side wins; ties go to the heavy side. Bids exceeding
    their whole group budget can never win and are dropped up front.
    """
    if cs.kind != "weighted":
        raise ValidationError(f"expected weighted constraints, got {cs.kind!r}")
    cs.validate_for(g)
    budget_of: dict[str, int] = {}
    group_of: dict[str, str] = {}
    for grp in cs.groups:
        for u in grp.members:
            budget_of[u] = grp.limit
            group_of[u] = grp.label

    heavy = [u for u in g.ids if g.weights[u] <= budget_of[u] and 2 * g.weights[u] > budget_of[u]]
    light = [u for u in g.ids if 2 * g.weights[u] <= budget_of[u]]

    heavy_sol = None
    if heavy:
        hg = g.induced(heavy)
        hgroups = [
            Group(grp.label, grp.members & set(heavy), 1)
            for grp in cs.groups
            if grp.members & set(heavy)
        ]
        heavy_sol, _ = solve_unweighted(hg, ConstraintSet("unweighted", hgroups))
    light_sol = None
    if light:
        lg = g.induced(light)
        lgroups = [
            Group(grp.label, grp.members & set(light), grp.limit)
            for grp in cs.groups
            if grp.members & set(light)
        ]
        light_sol, _ = solve_light(lg, ConstraintSet("weighted", lgroups), mode=light_mode)

    h_rev = heavy_sol.revenue if heavy_sol else 0
    l_rev = light_sol.revenue if light_sol else 0
    if h_rev >= l_rev:
        chosen = heavy_sol.selected if heavy_sol else frozenset()
        revenue = h_rev
    else:
        chosen = light_sol.selected
        revenue = l_rev
    assert_independent(g, chosen)
    return Solution(chosen, revenue, _budget_certificate(g, "weighted", lambda b_: 2 * b_ + 3))


def check_feasible(sol: Solution, g: BidGraph, cs: ConstraintSet | None = None) -> tuple[bool, list[str]]:
    """Verify independence plus whichever budget constraints apply."""
    violations: list[str] = []
    chosen = set(sol.selected)
    for u in sorted(chosen):
        if u not in g.adj:
            violations.append(f"selected bid {u!r} is not a graph node")
            continue
        for v in sorted(g.adj[u]):
            if v in chosen and u < v:
                violations.append(f"conflict: {u!r} and {v!r} share an object")
    expected = sum(g.weights[u] for u in chosen if u in g.weights)
    if sol.revenue != expected:
        violations.append(f"revenue {sol.revenue} != sum of selected weights {expected}")
    if cs is not None:
        for grp in cs.groups:
            inside = sorted(chosen & grp.members)
            if cs.kind in ("unweighted", "overlapping"):
                if len(inside) > grp.limit:
                    violations.append(
                        f"group {grp.label!r}: {len(inside)} winners exceed k={grp.limit}"
                    )
            else:
                spend = sum(g.weights[u] for u in inside)
                if spend > grp.limit:
                    violations.append(
                        f"group {grp.label!r}: spend {spend} exceeds budget {grp.limit} "
                        f"by {spend - grp.limit}"
                    )
    return (not violations, violations)


def group_clique_graph(g: BidGraph, cs: ConstraintSet) -> BidGraph:
    """Materialize 1-of-group constraints as cliques in the conflict graph.

    Valid only when every group limit is 1. Each group becomes a clique, so
    disjoint groups add at most 1 to beta and the plain solvers handle the
    constraint with no budget machinery.
    """
    for grp in cs.groups:
        if grp.limit != 1:
            raise ValidationError(f"group {grp.label!r} has k={grp.limit}; clique form needs k=1")
    out = BidGraph(dict(g.weights))
    for u in g.ids:
        for v in g.adj[u]:
            if u < v:
                out._add_edge(u, v)
    for grp in cs.groups:
        members = sorted(grp.members)
        for i in range(len(members)):
            for j in range(i + 1, len(members)):
                if members[j] not in out.adj[members[i]]:
                    out._add_edge(members[i], members[j])
    return out


def exact_feasible(g: BidGraph, cs: ConstraintSet | None, node_cap: int = 20) -> tuple[int, frozenset[str]]:
    """Exhaustive optimum over independent, budget-feasible bid sets.

    Depth-first over ids in ascending order with include/exclude branches,
    pruned by the sum of remaining weights. The oracle for ratio tests.
    """
    if g.n > node_cap:
        raise CapacityError(f"graph has {g.n} nodes, feasibility oracle capped at {node_cap}")
    ids = sorted(g.ids)
    n = len(ids)
    pos = {u: i for i, u in enumerate(ids)}
    w = [g.weights[u] for u in ids]
    nbr = [0] * n
    for u in ids:
        for v in g.adj[u]:
            nbr[pos[u]] |= 1 << pos[v]
    if cs is not None:
        groups_of: list[list[int]] = [[] for _ in range(n)]
        limits = [grp.limit for grp in cs.groups]
        for gi, grp in enumerate(cs.groups):
            for u in grp.members:
                if u in pos:
                    groups_of[pos[u]].append(gi)
        usage = [0] * len(limits)
    else:
        groups_of = [[] for _ in range(n)]
        limits = []
        usage = []
    weighted = cs is not None and cs.kind == "weighted"

    best_w = 0
    best_set: list[str] = []
    chosen_mask = 0
    chosen: list[str] = []
    suffix = [0] * (n + 1)
    for i in range(n - 1, -1, -1):
        suffix[i] = suffix[i + 1] + max(0, w[i])

    def dfs(i: int, cur: int) -> None:
        nonlocal best_w, best_set, chosen_mask
        if cur > best_w:
            best_w = cur
            best_set = list(chosen)
        if i == n or cur + suffix[i] <= best_w:
            return
        ok = not (nbr[i] & chosen_mask)
        if ok:
            for gi in groups_of[i]:
                room = limits[gi] - usage[gi]
                if (weighted and room < w[i]) or (not weighted and room < 1):
                    ok = False
                    break
        if ok:
            for gi in groups_of[i]:
                usage[gi] += w[i] if weighted else 1
            chosen.append(ids[i])
            chosen_mask |= 1 << i
            dfs(i + 1, cur + w[i])
            chosen_mask &= ~(1 << i)
            chosen.pop()
            for gi in groups_of[i]:
                usage[gi] -= w[i] if weighted else 1
        dfs(i + 1, cur)

    dfs(0, 0)
    return best_w, frozenset(best_set)


def _budget_certificate(g: BidGraph, algorithm: str, ratio_of_beta) -> Certificate:
    prov = g.ordering.provenance if g.ordering is not None else None
    bound = certified_bound(g.ordering) if g.ordering is not None else None
    claimed = Fraction(ratio_of_beta(bound)) if bound is not None else None
    return Certificate(algorithm, prov, bound, claimed)
