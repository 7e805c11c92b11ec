import random

import pytest
from hypothesis import given, settings, strategies as st

from wtap.decomposition import width
from wtap.errors import InfeasibleInstanceError
from wtap.generators import gen_random
from wtap.instance import TreeInstance
from wtap.oracles import opt_tree_enum
from wtap.tree_online import TreeSolver


def test_endpoint_rooted_path_uses_one_solver():
    inst = TreeInstance(n=4, edges=[(0, 1), (1, 2), (2, 3)], root=0,
                        raw_links=[(0, 2, 1), (1, 3, 1)])
    solver = TreeSolver(inst)
    assert len(solver.solvers) == 1
    assert [(l.left, l.right) for l in solver.minimal[0].links] == [(0, 2), (1, 3)]


def test_star_leaf_pair_covers_both_edges_with_one_purchase():
    inst = TreeInstance(n=3, edges=[(0, 1), (0, 2)], root=0,
                        raw_links=[(1, 2, 1)])
    solver = TreeSolver(inst)
    assert len(solver.projections_of[0]) == 2
    report = solver.serve_pair(1, 2)
    assert report.elementary == (0, 1)
    assert report.served == (0,)          # the second edge came along for free
    assert report.bought_sources == (0,)
    assert report.incremental_cost == 1
    assert solver.cost_total == 1
    assert all(solver.covered)


def test_identical_spans_dedup_to_cheapest_source():
    inst = TreeInstance(n=3, edges=[(0, 1), (1, 2)], root=0,
                        raw_links=[(0, 2, 4), (0, 2, 1)])
    solver = TreeSolver(inst)
    report = solver.serve_pair(0, 2)
    assert report.bought_sources == (1,)
    assert solver.cost_total == 1


def test_same_vertex_pair_is_a_no_op():
    inst = TreeInstance(n=3, edges=[(0, 1), (1, 2)], root=0,
                        raw_links=[(0, 2, 1)])
    solver = TreeSolver(inst)
    report = solver.serve_pair(1, 1)
    assert report.elementary == ()
    assert report.incremental_cost == 0
    assert solver.cost_total == 0


def test_repeat_pair_costs_nothing():
    inst = TreeInstance(n=4, edges=[(0, 1), (1, 2), (2, 3)], root=0,
                        raw_links=[(0, 3, 1)])
    solver = TreeSolver(inst)
    first = solver.serve_pair(0, 3)
    second = solver.serve_pair(0, 3)
    assert first.incremental_cost == 1
    assert second.incremental_cost == 0
    assert second.served == ()


def test_uncoverable_request_raises():
    inst = TreeInstance(n=3, edges=[(0, 1), (1, 2)], root=0,
                        raw_links=[(0, 1, 1)])
    solver = TreeSolver(inst)
    with pytest.raises(InfeasibleInstanceError):
        solver.serve_pair(0, 2)


def test_adjacent_pair_buys_a_covering_link():
    inst = TreeInstance(n=3, edges=[(0, 1), (1, 2)], root=0,
                        raw_links=[(1, 2, 1), (0, 2, 8)])
    solver = TreeSolver(inst)
    report = solver.serve_pair(1, 2)
    assert report.bought_sources == (0,)
    assert solver.cost_total == 1


def run_random(seed, n=9, extras=10, pairs=8):
    inst, _ = gen_random("tree", n, extras, 16.0, seed=seed)
    rng = random.Random(seed + 1)
    req = []
    for _ in range(pairs):
        s, t = rng.randrange(n), rng.randrange(n)
        if s != t:
            req.append((s, t))
    solver = TreeSolver(inst)
    solver.run(req)
    return inst, solver, req


def test_random_runs_cover_requested_paths():
    for seed in range(30):
        inst, solver, req = run_random(seed)
        for s, t in req:
            for e in inst.tree_path(s, t).edges:
                assert solver.covered[e]


def test_random_runs_account_costs_exactly():
    for seed in range(30):
        inst, solver, _ = run_random(seed)
        assert len(set(solver.purchase_order)) == len(solver.purchase_order)
        assert set(solver.purchase_order) == solver.bought_sources
        assert solver.cost_total == sum(
            inst.links[i].cost for i in solver.bought_sources)
        assert solver.cost_total == sum(
            r.incremental_cost for r in solver.reports)


def test_source_cost_never_below_path_accounting():
    # every projected purchase pays its source at most once, so the sum
    # of the per-path solver costs can only overcount
    for seed in range(30):
        _, solver, _ = run_random(seed)
        assert solver.cost_total <= solver.path_cost_total()


def test_projection_multiplicity_bounded_by_width():
    for seed in range(20):
        inst, solver, _ = run_random(seed, n=24, extras=20, pairs=4)
        w = max(1, width(inst, solver.decomp))
        for lid, prs in solver.projections_of.items():
            assert len(prs) <= w
            assert sum(1 for p in prs if not p.rooted) <= 1


def test_matches_offline_on_fixed_small_instance():
    inst = TreeInstance(
        n=6,
        edges=[(0, 1), (1, 2), (1, 3), (3, 4), (3, 5)],
        root=0,
        raw_links=[(2, 4, 1), (0, 2, 2), (4, 5, 1), (0, 5, 4)],
    )
    solver = TreeSolver(inst)
    solver.run([(2, 4), (4, 5)])
    for pair in [(2, 4), (4, 5)]:
        for e in inst.tree_path(*pair).edges:
            assert solver.covered[e]
    from wtap.instance import Request
    opt = opt_tree_enum(inst, [Request(s=2, t=4), Request(s=4, t=5)]).opt_cost
    assert opt <= solver.cost_total


@settings(max_examples=30)
@given(st.integers(0, 10 ** 6), st.integers(5, 12))
def test_random_trees_keep_per_path_duals_feasible(seed, n):
    from wtap.oracles import verify_dual_feasible
    inst, solver, _ = run_random(seed, n=n, extras=8, pairs=6)
    for ps, minimal in zip(solver.solvers, solver.minimal):
        ok, bad = verify_dual_feasible(ps.y, minimal.links)
        assert ok, bad
