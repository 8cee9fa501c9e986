"""Budget constraints: caps on how much any one bidder may win.

A surplus-electronics house runs three sales. Dana will buy at most one of
her three alternative lots (1-of-n), a reseller wants at most two crates
from a batch (k-of-n), and a collector bids beyond the cash in his wallet
(weighted budget). Group charges extend the opportunity-cost idea: later
bids in a group pay a share of the value already accumulated there.
"""

from auctol import (
    Bid,
    ConstraintSet,
    Group,
    Ordering,
    build_bid_graph,
    check_feasible,
    exact_feasible,
    group_clique_graph,
    opcost,
    orient,
    solve_overlapping,
    solve_unweighted,
    solve_weighted,
)

print("1-of-n: Dana bids on three disjoint lots but may win only one")
bids = [
    Bid("dana_lotA", {"lotA"}, 450, "dana"),
    Bid("dana_lotB", {"lotB"}, 700, "dana"),
    Bid("dana_lotC", {"lotC"}, 520, "dana"),
    Bid("erik_lotB", {"lotB"}, 650, "erik"),
]
g = orient(build_bid_graph(bids), Ordering(sorted(b.id for b in bids)))
cs = ConstraintSet("unweighted", [
    Group("dana", {"dana_lotA", "dana_lotB", "dana_lotC"}, 1),
    Group("erik", {"erik_lotB"}, 1),
])
sol, table = solve_unweighted(g, cs)
print(f"  winners: {sorted(sol.selected)}  revenue {sol.revenue}")
print(f"  oracle optimum: {exact_feasible(g, cs)[0]}")

print("\n  the same 1-of-n constraint can instead be folded into the graph as cliques:")
clique = orient(group_clique_graph(build_bid_graph(bids), cs), Ordering(sorted(b.id for b in bids)))
alt, _ = opcost(clique)
print(f"  clique-form winners: {sorted(alt.selected)}  revenue {alt.revenue}")

print("\noverlapping groups: a bid can sit in several caps at once")
bids = [
    Bid("seat_front", {"front"}, 300),
    Bid("seat_back", {"back"}, 280),
    Bid("combo", {"front2", "back2"}, 520),
]
g = orient(build_bid_graph(bids), Ordering(["seat_front", "seat_back", "combo"]))
cs = ConstraintSet("overlapping", [
    Group("front_row", {"seat_front", "combo"}, 1),
    Group("back_row", {"seat_back", "combo"}, 1),
])
sol = solve_overlapping(g, cs)
print(f"  overlap t={cs.overlap()}; winners {sorted(sol.selected)} revenue {sol.revenue}")

print("\nweighted budget: the collector has 1000 in cash")
bids = [
    Bid("clock", {"clock"}, 800, "collector"),
    Bid("radio", {"radio"}, 450, "collector"),
    Bid("lamp", {"lamp"}, 400, "collector"),
]
g = orient(build_bid_graph(bids), Ordering(["clock", "radio", "lamp"]))
cs = ConstraintSet("weighted", [Group("collector", {"clock", "radio", "lamp"}, 1000)])
sol = solve_weighted(g, cs)
ok, _ = check_feasible(sol, g, cs)
print(f"  winners: {sorted(sol.selected)}  spend {sol.revenue} of 1000  feasible={ok}")
print(f"  oracle optimum: {exact_feasible(g, cs)[0]}")
print("  (the 800 clock is heavy: it alone eats most of the wallet, so the")
print("   heavy pass and the light pass compete and the better side wins)")
