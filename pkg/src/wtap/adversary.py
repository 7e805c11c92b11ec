"""Hierarchical hard instances and the adaptive request driver.

The instance is a path of (2B)^k edges.  Level-j links tile the path
in disjoint blocks of length (2B)^j at cost B^j, so every edge sits
under exactly one link per level and cheap-per-edge coverage lives at
the top.  The driver repeatedly requests the leftmost edge the
algorithm has not yet covered, which punishes algorithms that cover
requests with low levels.

Algorithms are canonicalized: whenever a serve buys a link containing
the request, the wrapper also buys the unique lower-level links
containing that request inside it.  After the run the driver builds,
per level, the set of level-j links containing some request; each such
set is itself feasible for the request sequence, their total cost is
at most twice the algorithm's cost, and the cheapest of them bounds
the offline optimum, which pins the competitive ratio from below.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import BadInputError, InvariantViolationError
from .oracles import opt_path_dp
from .path_online import PathSolver
from .pruning import PathLink, build_minimal_instance


@dataclass(frozen=True)
class HLink:
    level: int
    index: int
    left: int
    right: int
    cost: int
    id: int


class HierarchicalInstance:
    SIZE_GUARD = 1 << 20

    def __init__(self, B: int, k: int):
        if B < 2:
            raise BadInputError("block factor B must be at least 2")
        if k < 1:
            raise BadInputError("depth k must be at least 1")
        n = (2 * B) ** k
        if n > self.SIZE_GUARD:
            raise BadInputError(f"path length {n} exceeds the memory guard")
        self.B = B
        self.k = k
        self.n = n
        self.levels = []
        self.links = []
        next_id = 0
        for j in range(k + 1):
            span = (2 * B) ** j
            cost = B ** j
            row = []
            for i in range(n // span):
                row.append(HLink(level=j, index=i, left=i * span,
                                 right=(i + 1) * span, cost=cost, id=next_id))
                next_id += 1
            self.levels.append(row)

            self.links.extend(row)

    def link_at(self, level: int, edge: int) -> HLink:
        span = (2 * self.B) ** level
        return self.levels[level][edge // span]

    def cov(self, edge: int) -> list:
        return [self.link_at(j, edge) for j in range(self.k + 1)]


class CanonicalWrapper:
    """Adds the containing lower-level chain to every relevant purchase."""

    def __init__(self, inst: HierarchicalInstance, inner, canonical: bool = True):
        self.inst = inst
        self.inner = inner
        self.canonical = canonical
        self.bought = set()
        self.cost = 0
        self.covered = [False] * inst.n

    def _buy(self, link: HLink):
        if link.id in self.bought:
            return
        self.bought.add(link.id)
        self.cost += link.cost
        for i in range(link.left, link.right):
            self.covered[i] = True

    def serve(self, e: int):
        links_by_id = {l.id: l for l in self.inst.links}
        for lid in self.inner.serve(e):
            link = links_by_id[lid]
            self._buy(link)
            if self.canonical and link.left <= e < link.right:
                for j in range(link.level):
                    self._buy(self.inst.link_at(j, e))


class GreedyCheapestCover:
    """Buys the cheapest covering link it does not own yet."""

    def __init__(self, inst: HierarchicalInstance):
        self.inst = inst
        self.owned = set()

    def serve(self, e: int):
        cands = [l for l in self.inst.cov(e) if l.id not in self.owned]
        if not cands:
            raise InvariantViolationError(f"nothing left to buy for edge {e}")
        pick = min(cands, key=lambda l: (l.cost, l.id))
        self.owned.add(pick.id)
        return [pick.id]


class BuyTop:
    """Buys the whole-path link on the first request; degenerate baseline."""

    def __init__(self, inst: HierarchicalInstance):
        self.inst = inst
        self.done = False

    def serve(self, e: int):
        if self.done:
            return []
        self.done = True
        return [self.inst.levels[self.inst.k][0].id]


class PathAlgContestant:
    """The primal-dual path solver as a lower-bound contestant.

    Only defined for B = 2, where level costs are already powers of
    two; the hierarchical link set is minimal as-is (disjoint tilings
    per class, nested rooted prefixes), which the constructor checks.
    """

    def __init__(self, inst: HierarchicalInstance):
        if inst.B != 2:
            raise BadInputError("the path solver contestant needs B = 2")
        plinks = [PathLink(left=l.left, right=l.right, cost=l.cost,
                           cls=l.level, id=l.id) for l in inst.links]
        minimal, _ = build_minimal_instance(inst.n, plinks)
        if len(minimal.links) != len(plinks):
            raise InvariantViolationError(
                "hierarchical instance should already be minimal")
        self.solver = PathSolver(minimal, n_global=inst.n + 1)

    def serve(self, e: int):
        rec = self.solver.serve(e)
        out = [] if rec.type1 is None else [rec.type1]
        if rec.type2 is not None:
            out.append(rec.type2)
        out.extend(rec.type3)
        return out


CONTESTANTS = {
    "greedy": (GreedyCheapestCover, True),
    "alg1": (PathAlgContestant, True),
    "top": (BuyTop, False),
}


@dataclass
class LowerBoundReport:
    B: int
    k: int
    n: int
    algo: str
    request_count: int
    alg_cost: int
    opt: int
    ratio: float
    level_cover_costs: list = field(default_factory=list)
    level_cover_total: int = 0
    cert_ok: bool = False
    requests: list = field(default_factory=list)


def adversary_drive(inst: HierarchicalInstance, algo_name: str) -> LowerBoundReport:
    """Run the leftmost-uncovered driver until the path is covered."""
    try:
        factory, canonical = CONTESTANTS[algo_name]
    except KeyError:
        raise BadInputError(f"unknown contestant {algo_name!r}") from None
    wrapper = CanonicalWrapper(inst, factory(inst), canonical=canonical)
    requests = []
    cursor = 0
    while True:
        while cursor < inst.n and wrapper.covered[cursor]:
            cursor += 1
        if cursor >= inst.n:
            break
        if len(requests) >= inst.n:
            raise InvariantViolationError("driver exceeded the request budget")
        requests.append(cursor)
        wrapper.serve(cursor)
        if not wrapper.covered[cursor]:
            raise InvariantViolationError(
                f"request {cursor} still uncovered after serve")

    level_costs = []
    total = 0
    for j in range(inst.k + 1):
        chosen = {inst.link_at(j, r).id for r in requests}
        cost_j = len(chosen) * inst.B ** j
        for r in requests:
            link = inst.link_at(j, r)
            if not (link.left <= r < link.right):
                raise InvariantViolationError("level cover misses a request")
        level_costs.append(cost_j)
        total += cost_j
    cert_ok = total <= 2 * wrapper.cost

    opt = opt_path_dp(inst.n, inst.links, requests).opt_cost
    ratio = wrapper.cost / opt if opt else float("inf")
    return LowerBoundReport(
        B=inst.B, k=inst.k, n=inst.n, algo=algo_name,
        request_count=len(requests), alg_cost=wrapper.cost, opt=opt,
        ratio=ratio, level_cover_costs=level_costs, level_cover_total=total,
        cert_ok=cert_ok, requests=requests,
    )
