"""Exact offline optima and independent verifiers.

Everything here is ground truth for tests and reports: a left-to-right
interval-cover DP (exact on paths), a brute subset enumeration to
cross-check it, a branch-and-bound tree oracle for small link sets,
and the dual-feasibility / solution-quality verifiers.
"""

from __future__ import annotations

import math
from bisect import bisect_left
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import InfeasibleInstanceError, OracleSizeError
from .instance import TreeInstance

TREE_ENUM_LINK_CAP = 24
PATH_ENUM_LINK_CAP = 20
NICE_ENUM_LINK_CAP = 14


@dataclass(frozen=True)
class OracleResult:
    opt_cost: int
    witness: frozenset
    method: str


def _cover_lists(links, requests):
    """Per requested edge (ascending), the links covering it."""
    by_left = sorted(links, key=lambda l: l.left)
    active = []
    out = []
    ptr = 0
    for r in requests:
        while ptr < len(by_left) and by_left[ptr].left <= r:
            active.append(by_left[ptr])
            ptr += 1
        active = [l for l in active if l.right > r]
        out.append(list(active))
    return out


def opt_path_dp(edge_count: int, links, requested_edges) -> OracleResult:
    """Exact minimum-cost cover of the requested path edges.

    Left-to-right DP on requested positions: the link chosen for the
    leftmost uncovered request covers a contiguous block of requests,
    so states are request-list suffixes.
    """
    reqs = sorted(set(requested_edges))
    for r in reqs:
        if not 0 <= r < edge_count:
            raise InfeasibleInstanceError(f"requested edge {r} out of range")
    if not reqs:
        return OracleResult(0, frozenset(), "interval-dp")
    covers = _cover_lists(links, reqs)
    k = len(reqs)
    best = [None] * (k + 1)
    best[k] = (0, None, None)
    for i in range(k - 1, -1, -1):
        r = reqs[i]
        pick = None
        for l in covers[i]:
            j = bisect_left(reqs, l.right)
            cand = l.cost + best[j][0]
            if pick is None or cand < pick[0] or (cand == pick[0] and l.id < pick[1]):
                pick = (cand, l.id, j)
        if pick is None:
            raise InfeasibleInstanceError(f"edge {r} has no covering link")
        best[i] = pick
    witness = set()
    i = 0
    while i < k:
        _, lid, j = best[i]
        witness.add(lid)
        i = j
    return OracleResult(best[0][0], frozenset(witness), "interval-dp")


def opt_path_enum(edge_count: int, links, requested_edges) -> OracleResult:
    """Brute-force subset minimum; cross-check oracle for the DP."""
    links = list(links)
    if len(links) > PATH_ENUM_LINK_CAP:
        raise OracleSizeError(f"enumeration capped at {PATH_ENUM_LINK_CAP} links")
    reqs = sorted(set(requested_edges))
    if not reqs:
        return OracleResult(0, frozenset(), "subset-enum")
    pos = {r: i for i, r in enumerate(reqs)}
    full = (1 << len(reqs)) - 1
    masks = []
    for l in links:
        m = 0
        for r in reqs:
            if l.left <= r < l.right:
                m |= 1 << pos[r]
        masks.append(m)
    best_cost = None
    best_set = None
    for subset in range(1 << len(links)):
        m = 0
        c = 0
        s = subset
        while s:
            b = s & -s
            i = b.bit_length() - 1
            m |= masks[i]
            c += links[i].cost
            s ^= b
        if m == full and (best_cost is None or c < best_cost):
            best_cost = c
            best_set = subset
    if best_cost is None:
        raise InfeasibleInstanceError("no link subset covers the requests")
    witness = frozenset(links[i].id for i in range(len(links))
                        if best_set >> i & 1)
    return OracleResult(best_cost, witness, "subset-enum")


def opt_tree_enum(inst: TreeInstance, requests=None) -> OracleResult:
    """Exact tree optimum by branch and bound over the link set.

    Feasible means every edge of every request path is covered.  Capped
    at TREE_ENUM_LINK_CAP links; branch on the uncovered edge with the
    fewest candidates, bound by best-so-far plus the most expensive
    single-edge minimum.
    """
    if len(inst.links) > TREE_ENUM_LINK_CAP:
        raise OracleSizeError(
            f"tree enumeration capped at {TREE_ENUM_LINK_CAP} links")
    if requests is None:
        requests = inst.requests
    required = set()
    for req in requests:
        required.update(inst.expand_request(req))
    if not required:
        return OracleResult(0, frozenset(), "subset-enum")
    edge_ids = sorted(required)
    pos = {e: i for i, e in enumerate(edge_ids)}
    full = (1 << len(edge_ids)) - 1
    link_masks = []
    for ln in inst.links:
        m = 0
        for e in inst.link_edges(ln.id):
            if e in pos:
                m |= 1 << pos[e]
        link_masks.append(m)
    covering = [[] for _ in edge_ids]
    for li, m in enumerate(link_masks):
        for i in range(len(edge_ids)):
            if m >> i & 1:
                covering[i].append(li)
    cheapest = []
    for i, cands in enumerate(covering):
        if not cands:
            raise InfeasibleInstanceError(
                f"request edge {edge_ids[i]} has no covering link")
        cheapest.append(min(inst.links[li].cost for li in cands))

    best = [math.inf, frozenset()]

    def dfs(mask, cost, chosen):
        if mask == full:
            if cost < best[0]:
                best[0] = cost
                best[1] = frozenset(chosen)
            return
        lb = 0
        branch_i = -1
        branch_deg = None
        for i in range(len(edge_ids)):
            if mask >> i & 1:
                continue
            if cheapest[i] > lb:
                lb = cheapest[i]
            deg = len(covering[i])
            if branch_deg is None or deg < branch_deg:
                branch_deg = deg
                branch_i = i
        if cost + lb >= best[0]:
            return
        for li in sorted(covering[branch_i], key=lambda j: (inst.links[j].cost, j)):
            if li in chosen:
                continue
            chosen.append(li)
            dfs(mask | link_masks[li], cost + inst.links[li].cost, chosen)
            chosen.pop()

    dfs(0, 0, [])
    if best[0] is math.inf:
        raise InfeasibleInstanceError("no link subset covers the requests")
    witness = frozenset(inst.links[li].id for li in best[1])
    return OracleResult(int(best[0]), witness, "subset-enum")


def verify_dual_feasible(y, links):
    """Exact check of the packing constraints; returns (ok, violators)."""
    prefix = [Fraction(0)]
    for v in y:
        prefix.append(prefix[-1] + v)
    bad = []
    for l in links:
        if prefix[l.right] - prefix[l.left] > l.cost:
            bad.append(l.id)
    return (not bad), bad


@dataclass
class ConditionRecord:
    id: str
    bound: str
    observed: str
    ok: bool


@dataclass
class NicenessReport:
    conditions: list = field(default_factory=list)
    enumerated: bool = False
    feasible_split_count: int = 0
    max_split_ratio: float = 0.0
    split_cap: float = 24.0
    ok: bool = True

    def add(self, cid, bound, observed, ok):
        self.conditions.append(ConditionRecord(cid, str(bound), str(observed), ok))
        if not ok:
            self.ok = False


def _width_term(n_global: int) -> float:
    return 2 * math.log2(max(2, n_global)) + 1


def verify_nice(solver, n_global: int,
                enum_cap: int = NICE_ENUM_LINK_CAP) -> NicenessReport:
    """Check the purchased solution against the quality certificate.

    Three direct conditions (total cost vs the scaled hat dual, per
    non-rooted hat load, per rooted full load) plus, on instances with
    at most ``enum_cap`` links, an exhaustive sweep over every feasible
    solution of the pruned universe checking
    ``c(F) <= 24*c(rooted part) + 24*(2 log2 n + 1)*c(non-rooted part)``.
    """
    report = NicenessReport()
    minimal = solver.minimal
    links = minimal.links
    hat = solver.hat_dual(n_global)
    hat_total = sum(hat, Fraction(0))
    total = solver.cost

    ok_a = Fraction(total) <= 24 * hat_total
    report.add("cost-vs-hat-dual", f"<= 24*{hat_total}", str(total), ok_a)

    wterm = _width_term(n_global)
    hat_prefix = [Fraction(0)]
    for v in hat:
        hat_prefix.append(hat_prefix[-1] + v)
    worst_nr = 0.0
    ok_b = True
    for l in links:
        if l.rooted:
            continue
        load = hat_prefix[l.right] - hat_prefix[l.left]
        cap = Fraction(2 * wterm) * l.cost
        if load > cap:
            ok_b = False
        if l.cost and float(load) / l.cost > worst_nr:
            worst_nr = float(load) / l.cost
    report.add("nonrooted-hat-load", f"<= 2*({wterm:.3f})*cost",
               f"max load/cost {worst_nr:.3f}", ok_b)

    ok_c = True
    worst_r = Fraction(0)
    for l in links:
        if not l.rooted:
            continue
        load = solver.full_load(l)
        if load > 3 * l.cost:
            ok_c = False
        ratio = load / l.cost
        if ratio > worst_r:
            worst_r = ratio
    report.add("rooted-full-load", "<= 3*cost",
               f"max load/cost {float(worst_r):.3f}", ok_c)

    if len(links) <= enum_cap:
        report.enumerated = True
        reqs = sorted(solver.requested)
        pos = {r: i for i, r in enumerate(reqs)}
        full = (1 << len(reqs)) - 1
        masks = []
        for l in links:
            m = 0
            for r in reqs:
                if l.left <= r < l.right:
                    m |= 1 << pos[r]
            masks.append(m)
        nlinks = len(links)
        cover = [0] * (1 << nlinks)
        ok_d = True
        worst = 0.0
        count = 0
        for s in range(1, 1 << nlinks):
            low = s & -s
            cover[s] = cover[s ^ low] | masks[low.bit_length() - 1]
            if cover[s] != full:
                continue
            count += 1
            rcost = 0
            scost = 0
            for i in range(nlinks):
                if s >> i & 1:
                    if links[i].rooted:
                        rcost += links[i].cost
                    else:
                        scost += links[i].cost
            denom = rcost + wterm * scost
            ratio = total / denom if denom else math.inf
            if ratio > worst:
                worst = ratio
            if total > 24 * rcost + 24 * wterm * scost + 1e-9:
                ok_d = False
        report.feasible_split_count = count
        report.max_split_ratio = worst
        report.add("niceness-enumerated", "<= 24 per split",
                   f"max constant {worst:.3f} over {count} solutions", ok_d)
    return report
