"""Independent feasibility check of a solution against a scenario.

Nothing here reads a built model: every family of constraints is recomputed
straight from the scenario, so a bug in the builder cannot hide itself.
Binary domains are checked with an absolute tolerance, budgets with a
relative one and flow balances relative to the largest term involved.
"""

from __future__ import annotations

import logging
from collections import defaultdict

from pydantic import BaseModel, ConfigDict

from vsn_alloc.errors import DomainError
from vsn_alloc.scenario.energy import rx_energy_per_bit, tx_energy_per_bit
from vsn_alloc.scenario.models import Scenario

from .milp import RoutingKind, RoutingMode, VarKind
from .solution import Solution, parse_variable_name

logger = logging.getLogger(__name__)

TOL = 1e-6

_BINARY_KINDS = {VarKind.Z, VarKind.X, VarKind.Y, VarKind.H, VarKind.G}


class Violation(BaseModel):
    """One failed check: the row tag and by how much it is off."""

    model_config = ConfigDict(frozen=True)

    tag: str
    residual: float
    detail: str = ""


def _budget_violated(lhs: float, cap: float) -> bool:
    return lhs > cap + TOL * max(1.0, abs(cap))


def _balance_violated(residual: float, terms: list[float]) -> bool:
    scale = max([1.0] + [abs(t) for t in terms])
    return abs(residual) > TOL * scale


def validate_solution(
    scenario: Scenario,
    mode: RoutingMode,
    solution: Solution,
) -> list[Violation]:
    """Return every violated constraint of *solution*; empty means valid.

    Solutions that claim no values (infeasible, no incumbent) have nothing to
    check and yield an empty list.
    """
    if not solution.status.has_values:
        return []

    topo = scenario.topology
    apps = {a.id: a for a in scenario.applications}
    sinks = set(scenario.sink_ids)
    big_m = scenario.big_m_bps
    out: list[Violation] = []

    def flag(tag: str, residual: float, detail: str = "") -> None:
        out.append(Violation(tag=tag, residual=float(residual), detail=detail))

    z: dict[int, float] = defaultdict(float)
    x: dict[int, float] = defaultdict(float)
    h: dict[tuple[int, int], float] = defaultdict(float)
    y: dict[tuple[int, int, int], float] = {}
    f: dict[tuple[int, int], float] = {}
    g: dict[tuple[int, int], float] = {}

    # -- domains and structural zeros --------------------------------------

    for name, value in solution.values.items():
        try:
            kind, key = parse_variable_name(name)
        except DomainError:
            flag(f"Name[{name}]", 0.0, "unparseable variable name")
            continue
        if kind in _BINARY_KINDS:
            if value < -TOL or value > 1 + TOL:
                flag(f"Bound[{name}]", value, "binary outside [0, 1]")
            elif abs(value - round(value)) > TOL:
                flag(f"Bin[{name}]", value - round(value), "fractional binary")
        elif value < -TOL:
            flag(f"Bound[{name}]", value, "negative flow")

        if kind is VarKind.Z:
            z[key[0]] = value
        elif kind is VarKind.X:
            x[key[0]] = value
        elif kind is VarKind.H:
            h[(key[0], key[1])] = value
        elif kind is VarKind.Y:
            i, j, k = key
            try:
                covering = topo.covering_nodes(j, k)
            except LookupError:
                covering = ()
            if i not in covering and abs(value) > TOL:
                flag(f"Eq2b[{i},{j},{k}]", value, "sensing outside the coverage set")
            y[(i, j, k)] = value
        elif kind is VarKind.F:
            lk = (key[0], key[1])
            if lk not in topo.link_index and abs(value) > TOL:
                flag(f"Eq10[{lk[0]},{lk[1]}]", value, "flow on a non-viable link")
            f[lk] = value
        elif kind is VarKind.G:
            lk = (key[0], key[1])
            if lk not in topo.link_index and abs(value) > TOL:
                flag(f"Eq11[{lk[0]},{lk[1]}]", value, "next hop over a non-viable link")
            g[lk] = value

    y_by_node: dict[int, list[tuple[tuple[int, int, int], float]]] = defaultdict(list)
    for key, value in y.items():
        y_by_node[key[0]].append((key, value))
    in_flow: dict[int, float] = defaultdict(float)
    out_flow: dict[int, float] = defaultdict(float)
    for (i, hh), value in f.items():
        out_flow[i] += value
        in_flow[hh] += value

    def sensed_rate(nid: int) -> float:
        return sum(apps[k[1]].rate_bps * v for k, v in y_by_node[nid] if k[1] in apps)

    # -- coverage ----------------------------------------------------------

    for app in scenario.applications:
        n_tp = len(app.test_points)
        realized = 0.0
        for tp in app.test_points:
            covered = sum(y.get((i, app.id, tp.id), 0.0) for i in topo.covering_nodes(app.id, tp.id))
            realized += covered
            residual = covered - h[(app.id, tp.id)]
            if abs(residual) > TOL:
                flag(f"Eq2[{app.id},{tp.id}]", residual)
        h_total = sum(h[(app.id, tp.id)] for tp in app.test_points)
        linkage = max(
            abs(h_total - n_tp * z[app.id]),
            abs(realized - n_tp * z[app.id]),
        )
        if linkage > TOL:
            flag(f"Eq4[{app.id}]", linkage, "deployment is not all-or-nothing")

    # -- node budgets --------------------------------------------------------

    for node in scenario.nodes:
        nid = node.id
        profile = scenario.profiles[node.profile]
        per_app: dict[int, float] = defaultdict(float)
        memory = cpu = 0.0
        for (_, j, _), v in y_by_node[nid]:
            if j not in apps:
                continue
            per_app[j] += v
            memory += apps[j].memory_bits * v
            cpu += apps[j].mips * v
        for j, count in sorted(per_app.items()):
            cap = apps[j].per_node_cap
            if count > cap + TOL:
                flag(f"Eq3[{nid},{j}]", count - cap)
        if _budget_violated(memory, profile.memory_bits):
            flag(f"Eq5[{nid}]", memory - profile.memory_bits)
        if _budget_violated(cpu, profile.mips):
            flag(f"Eq6[{nid}]", cpu - profile.mips)

    # -- flow ----------------------------------------------------------------

    for nid in scenario.node_ids:
        sensed = sensed_rate(nid)
        if nid not in sinks:
            residual = in_flow[nid] - out_flow[nid] + sensed
            if _balance_violated(residual, [in_flow[nid], out_flow[nid], sensed]):
                flag(f"Eq7[{nid}]", residual, "flow not conserved")
        activation = in_flow[nid] + sensed - big_m * x[nid]
        if activation > TOL * max(1.0, big_m):
            flag(f"Eq9[{nid}]", activation, "carries traffic while inactive")

    offered = sum(a.offered_rate_bps * z[a.id] for a in scenario.applications)
    delivered = sum(in_flow[s] + sensed_rate(s) for s in sinks)
    if _balance_violated(offered - delivered, [offered, delivered]):
        flag("Eq8", offered - delivered, "sinks do not receive all generated data")

    # -- routing restrictions ------------------------------------------------

    if mode.kind is RoutingKind.SINGLEPATH:
        hops: dict[int, float] = defaultdict(float)
        for lk, v in g.items():
            hops[lk[0]] += v
        for nid, count in sorted(hops.items()):
            if count > 1 + TOL:
                flag(f"Eq12[{nid}]", count - 1, "more than one next hop")
        for lk, v in f.items():
            excess = v - big_m * g.get(lk, 0.0)
            if excess > TOL * max(1.0, big_m):
                flag(f"Eq13[{lk[0]},{lk[1]}]", excess, "flow over an unselected link")
    elif mode.kind is RoutingKind.STATIC:
        for lk, v in f.items():
            if v > TOL and not mode.dodag.is_tree_link(*lk):
                flag(f"Static[{lk[0]},{lk[1]}]", v, "flow off the routing tree")

    # -- bandwidth sharing ---------------------------------------------------

    usage = [f.get(lk, 0.0) / float(topo.capacity[n]) for n, lk in enumerate(topo.links)]
    for n, lk in enumerate(topo.links):
        share = usage[n] + sum(usage[m] for m in topo.interference_sets[n])
        if share > 1 + TOL:
            flag(f"Eq15[{lk[0]},{lk[1]}]", share - 1, "airtime over-subscribed")

    # -- energy --------------------------------------------------------------

    rho = rx_energy_per_bit(scenario.radio)
    for node in scenario.nodes:
        nid = node.id
        power = rho * in_flow[nid]
        power += sum(
            tx_energy_per_bit(topo.distance_between(*lk), scenario.radio) * v
            for lk, v in f.items()
            if lk[0] == nid and lk in topo.link_index
        )
        power += sum(apps[k[1]].cpu_watts * v for k, v in y_by_node[nid] if k[1] in apps)
        budget = scenario.profiles[node.profile].energy_j / scenario.lifetime_s
        if _budget_violated(power, budget):
            flag(f"Eq18[{nid}]", power - budget, "lifetime target missed")

    # -- objective -----------------------------------------------------------

    objective = sum(a.preference * z[a.id] for a in scenario.applications)
    objective -= sum(n.activation_cost * x[n.id] for n in scenario.nodes)
    if abs(objective - solution.objective) > TOL * max(1.0, abs(objective)):
        flag("Objective", solution.objective - objective, "reported objective is off")

    if out:
        logger.info("solution fails validation: %d violation(s)", len(out))
    return out
