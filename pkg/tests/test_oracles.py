from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from wtap.errors import InfeasibleInstanceError, OracleSizeError
from wtap.instance import Request, TreeInstance
from wtap.oracles import (
    PATH_ENUM_LINK_CAP,
    TREE_ENUM_LINK_CAP,
    opt_path_dp,
    opt_path_enum,
    opt_tree_enum,
    verify_dual_feasible,
    verify_nice,
)
from wtap.pruning import build_minimal_instance, path_instance_from_tree
from wtap.path_online import run_sequence

from conftest import PL, brute_cover


def random_links(data, m, count, max_cls=3):
    links = []
    for i in range(count):
        left = data.draw(st.integers(0, m - 1))
        right = data.draw(st.integers(left + 1, m))
        cls = data.draw(st.integers(0, max_cls))
        links.append(PL(left, right, cls, i))
    return links


# -- path DP -----------------------------------------------------------------

def test_dp_picks_cheaper_parallel_link():
    links = [PL(0, 1, 2, 0), PL(0, 1, 1, 1)]
    res = opt_path_dp(1, links, [0])
    assert res.opt_cost == 2
    assert res.witness == frozenset({1})
    assert res.method == "interval-dp"


def test_dp_no_requests_is_free():
    res = opt_path_dp(5, [PL(0, 5, 0, 0)], [])
    assert res.opt_cost == 0 and res.witness == frozenset()


def test_dp_tie_takes_smaller_id():
    links = [PL(0, 1, 0, 4), PL(0, 1, 0, 2)]
    assert opt_path_dp(1, links, [0]).witness == frozenset({2})


def test_dp_requires_coverage():
    with pytest.raises(InfeasibleInstanceError):
        opt_path_dp(3, [PL(0, 1, 0, 0)], [2])


def test_dp_rejects_out_of_range_request():
    with pytest.raises(InfeasibleInstanceError):
        opt_path_dp(3, [PL(0, 3, 0, 0)], [7])


def test_dp_combines_disjoint_spans():
    links = [PL(0, 2, 0, 0), PL(2, 4, 0, 1), PL(0, 4, 3, 2)]
    res = opt_path_dp(4, links, [0, 3])
    assert res.opt_cost == 2
    assert res.witness == frozenset({0, 1})


@given(st.data())
def test_dp_matches_enum_and_brute(data):
    m = data.draw(st.integers(min_value=1, max_value=7))
    count = data.draw(st.integers(min_value=1, max_value=7))
    links = random_links(data, m, count)
    reqs = [e for e in range(m) if any(l.covers(e) for l in links)]
    reqs = data.draw(st.sets(st.sampled_from(reqs))) if reqs else set()
    if not reqs:
        return
    a = opt_path_dp(m, links, reqs)
    b = opt_path_enum(m, links, reqs)
    assert a.opt_cost == b.opt_cost
    assert a.opt_cost == brute_cover(m, links, reqs)
    for res in (a, b):
        covered = set()
        for lid in res.witness:
            l = links[lid]
            covered.update(range(l.left, l.right))
        assert reqs <= covered
        assert sum(links[lid].cost for lid in res.witness) == res.opt_cost


@given(st.data())
def test_dp_monotone_in_requests(data):
    m = data.draw(st.integers(min_value=2, max_value=8))
    links = [PL(0, m, 3, 99)] + random_links(data, m, 4)
    small = data.draw(st.sets(st.integers(0, m - 1)))
    extra = data.draw(st.sets(st.integers(0, m - 1)))
    lo = opt_path_dp(m, links, small).opt_cost
    hi = opt_path_dp(m, links, small | extra).opt_cost
    assert lo <= hi


def test_enum_cap():
    links = [PL(0, 1, 0, i) for i in range(PATH_ENUM_LINK_CAP + 1)]
    with pytest.raises(OracleSizeError):
        opt_path_enum(1, links, [0])


# -- tree oracle --------------------------------------------------------------

def line_tree(n, raw_links, requests=()):
    return TreeInstance(n=n, edges=[(i, i + 1) for i in range(n - 1)],
                        root=0, raw_links=raw_links, requests=requests)


def test_tree_enum_single_link():
    inst = line_tree(3, [(0, 2, 1)], requests=[(0, 2)])
    res = opt_tree_enum(inst)
    assert res.opt_cost == 1
    assert res.witness == frozenset({0})


def test_tree_enum_needs_both_halves():
    inst = line_tree(5, [(0, 2, 1), (2, 4, 1), (0, 4, 10)],
                     requests=[(0, 4)])
    res = opt_tree_enum(inst)
    # the two short links cost 2 together; the long one rounds to 16
    assert res.opt_cost == 2
    assert res.witness == frozenset({0, 1})


def test_tree_enum_no_requests():
    inst = line_tree(3, [(0, 2, 1)])
    assert opt_tree_enum(inst).opt_cost == 0


def test_tree_enum_infeasible():
    inst = line_tree(3, [(0, 1, 1)], requests=[(1, 2)])
    with pytest.raises(InfeasibleInstanceError):
        opt_tree_enum(inst)


def test_tree_enum_cap():
    raw_links = [(0, 1, 1)] * (TREE_ENUM_LINK_CAP + 1)
    inst = line_tree(2, raw_links)
    with pytest.raises(OracleSizeError):
        opt_tree_enum(inst)


def test_tree_enum_explicit_requests_override():
    inst = line_tree(4, [(0, 2, 1), (2, 3, 1)], requests=[(0, 3)])
    assert opt_tree_enum(inst, requests=[Request(s=0, t=2)]).opt_cost == 1


@given(st.data())
def test_tree_enum_matches_path_dp_on_paths(data):
    n = data.draw(st.integers(min_value=2, max_value=7))
    count = data.draw(st.integers(min_value=1, max_value=6))
    raw_links = []
    for _ in range(count):
        u = data.draw(st.integers(0, n - 1))
        v = data.draw(st.integers(0, n - 1))
        if u == v:
            v = (v + 1) % n
        raw_links.append((u, v, data.draw(st.sampled_from([1, 2, 4]))))
    s = data.draw(st.integers(0, n - 1))
    t = data.draw(st.integers(0, n - 1))
    if s == t:
        return
    inst = line_tree(n, raw_links, requests=[(s, t)])
    edge_count, plinks, request_edges = path_instance_from_tree(inst)
    try:
        tree_res = opt_tree_enum(inst)
    except InfeasibleInstanceError:
        with pytest.raises(InfeasibleInstanceError):
            opt_path_dp(edge_count, plinks, request_edges)
        return
    path_res = opt_path_dp(edge_count, plinks, request_edges)
    assert tree_res.opt_cost == path_res.opt_cost


# -- verifiers ----------------------------------------------------------------

def test_dual_feasible_accepts_tight():
    ok, bad = verify_dual_feasible([Fraction(1), Fraction(1)], [PL(0, 2, 1, 0)])
    assert ok and bad == []


def test_dual_feasible_reports_violator():
    ok, bad = verify_dual_feasible([Fraction(1), Fraction(1)], [PL(0, 2, 0, 7)])
    assert not ok and bad == [7]


def test_verify_nice_three_vertex_run():
    """Dual run on the smallest interesting instance, checked end to end."""
    links = [PL(0, 1, 0, 0), PL(1, 2, 0, 1), PL(0, 2, 1, 2)]
    minimal, _ = build_minimal_instance(2, links)
    assert len(minimal.links) == 3
    solver = run_sequence(minimal, [0, 1])
    assert solver.cost == 3
    rep = verify_nice(solver, solver.n_global)
    assert rep.ok
    assert rep.enumerated
    assert rep.feasible_split_count == 5
    assert abs(rep.max_split_ratio - 1.5) < 1e-9
    ids = [c.id for c in rep.conditions]
    assert ids == ["cost-vs-hat-dual", "nonrooted-hat-load",
                   "rooted-full-load", "niceness-enumerated"]


def test_verify_nice_skips_enumeration_over_cap():
    links = [PL(0, 1, 0, 0), PL(1, 2, 0, 1), PL(0, 2, 1, 2)]
    minimal, _ = build_minimal_instance(2, links)
    solver = run_sequence(minimal, [0, 1])
    rep = verify_nice(solver, solver.n_global, enum_cap=2)
    assert not rep.enumerated
    assert rep.ok
