"""Translate a scenario into the allocation MILP.

Variables
---------
``z[j]``      application j deployed
``h[j,k]``    test point k of j covered
``y[i,j,k]``  node i senses test point k of j (only for i in S_jk)
``x[i]``      node i active
``f[i,h]``    flow on viable link (i, h), bits/second
``g[i,h]``    link (i, h) is the single next hop of i (singlepath only)

Row tags
--------
``Eq2[j,k]`` coverage, ``Eq3[i,j]`` per-node test-point cap, ``Eq4[j]``
all-or-nothing deployment, ``Eq5[i]`` memory, ``Eq6[i]`` processing,
``Eq7[i]`` flow conservation at non-sinks, ``Eq8`` delivery to the sinks,
``Eq9[i]`` activation, ``Eq12[i]`` / ``Eq13[i,h]`` single next hop,
``Eq15[i,h]`` interference time sharing, ``Eq18[i]`` energy for the
lifetime target.
"""

from __future__ import annotations

import logging
from collections import defaultdict

from vsn_alloc.scenario.energy import rx_energy_per_bit, tx_energy_per_bit
from vsn_alloc.scenario.models import Scenario

from .milp import (
    LinearConstraint,
    MilpModel,
    ModelIndex,
    RoutingKind,
    RoutingMode,
    Sense,
    VariableHandle,
    VarKind,
)

logger = logging.getLogger(__name__)


class _Builder:
    """Accumulates variables and rows for one :func:`build_model` call."""

    def __init__(self) -> None:
        self.variables: list[VariableHandle] = []
        self.constraints: list[LinearConstraint] = []
        self.index = ModelIndex()

    def var(
        self,
        kind: VarKind,
        key: tuple[int, ...],
        *,
        upper: float = 1.0,
        integral: bool = True,
    ) -> int:
        handle = VariableHandle(
            index=len(self.variables),
            kind=kind,
            key=key,
            lower=0.0,
            upper=upper,
            integral=integral,
        )
        self.variables.append(handle)
        self.index.add(handle)
        return handle.index

    def row(
        self,
        terms: list[tuple[int, float]],
        sense: Sense,
        rhs: float,
        tag: str,
    ) -> None:
        merged: dict[int, float] = defaultdict(float)
        for idx, coef in terms:
            merged[idx] += coef
        self.constraints.append(
            LinearConstraint(
                terms=tuple((idx, c) for idx, c in merged.items() if c != 0.0),
                sense=sense,
                rhs=rhs,
                tag=tag,
            )
        )


def build_model(scenario: Scenario, mode: RoutingMode) -> MilpModel:
    """Build the allocation MILP of *scenario* under routing *mode*.

    Static mode keeps a flow variable on every viable link but pins its upper
    bound to 0 unless the link is the DODAG parent link of its transmitter.
    Nodes the DODAG cannot route therefore cannot forward anything.
    """
    topo = scenario.topology
    radio = scenario.radio
    big_m = scenario.big_m_bps
    sinks = set(scenario.sink_ids)
    b = _Builder()

    # -- variables ---------------------------------------------------------

    z = {app.id: b.var(VarKind.Z, (app.id,)) for app in scenario.applications}
    h: dict[tuple[int, int], int] = {}
    y: dict[tuple[int, int, int], int] = {}
    for app in scenario.applications:
        for tp in app.test_points:
            h[(app.id, tp.id)] = b.var(VarKind.H, (app.id, tp.id))
    for app in scenario.applications:
        for tp in app.test_points:
            for i in topo.covering_nodes(app.id, tp.id):
                y[(i, app.id, tp.id)] = b.var(VarKind.Y, (i, app.id, tp.id))
    x = {nid: b.var(VarKind.X, (nid,)) for nid in scenario.node_ids}

    static = mode.kind is RoutingKind.STATIC
    f: dict[tuple[int, int], int] = {}
    for i, hh in topo.links:
        open_link = not static or mode.dodag.is_tree_link(i, hh)
        f[(i, hh)] = b.var(
            VarKind.F, (i, hh), upper=big_m if open_link else 0.0, integral=False
        )
    g: dict[tuple[int, int], int] = {}
    if mode.kind is RoutingKind.SINGLEPATH:
        g = {lk: b.var(VarKind.G, lk) for lk in topo.links}

    # Sensing terms grouped by node.
    y_by_node: dict[int, list[tuple[int, int, int]]] = defaultdict(list)
    for key in y:
        y_by_node[key[0]].append(key)
    out_links: dict[int, list[tuple[int, int]]] = defaultdict(list)
    in_links: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for lk in topo.links:
        out_links[lk[0]].append(lk)
        in_links[lk[1]].append(lk)
    apps = {app.id: app for app in scenario.applications}

    # -- coverage ----------------------------------------------------------

    for app in scenario.applications:
        for tp in app.test_points:
            terms = [(y[(i, app.id, tp.id)], 1.0) for i in topo.covering_nodes(app.id, tp.id)]
            terms.append((h[(app.id, tp.id)], -1.0))
            b.row(terms, Sense.EQ, 0.0, f"Eq2[{app.id},{tp.id}]")

    for nid in scenario.node_ids:
        per_app: dict[int, list[int]] = defaultdict(list)
        for key in y_by_node[nid]:
            per_app[key[1]].append(y[key])
        for app_id, cols in sorted(per_app.items()):
            cap = apps[app_id].per_node_cap
            if len(cols) > cap:
                b.row([(c, 1.0) for c in cols], Sense.LE, float(cap), f"Eq3[{nid},{app_id}]")

    for app in scenario.applications:
        terms = [(h[(app.id, tp.id)], 1.0) for tp in app.test_points]
        terms.append((z[app.id], -float(len(app.test_points))))
        b.row(terms, Sense.EQ, 0.0, f"Eq4[{app.id}]")

    # -- node budgets --------------------------------------------------------

    for nid in scenario.node_ids:
        profile = scenario.profile_of(nid)
        mem = [(y[k], apps[k[1]].memory_bits) for k in y_by_node[nid] if apps[k[1]].memory_bits]
        if mem:
            b.row(mem, Sense.LE, profile.memory_bits, f"Eq5[{nid}]")
        cpu = [(y[k], apps[k[1]].mips) for k in y_by_node[nid] if apps[k[1]].mips]
        if cpu:
            b.row(cpu, Sense.LE, profile.mips, f"Eq6[{nid}]")

    # -- flow ----------------------------------------------------------------

    def sensed(nid: int) -> list[tuple[int, float]]:
        return [(y[k], apps[k[1]].rate_bps) for k in y_by_node[nid]]

    for nid in scenario.node_ids:
        if nid in sinks:
            continue
        terms = [(f[lk], 1.0) for lk in in_links[nid]]
        terms += [(f[lk], -1.0) for lk in out_links[nid]]
        terms += sensed(nid)
        b.row(terms, Sense.EQ, 0.0, f"Eq7[{nid}]")

    delivery = [(z[a.id], a.offered_rate_bps) for a in scenario.applications]
    for s in sorted(sinks):
        delivery += [(f[lk], -1.0) for lk in in_links[s]]
        delivery += [(c, -r) for c, r in sensed(s)]
    b.row(delivery, Sense.EQ, 0.0, "Eq8")

    for nid in scenario.node_ids:
        terms = [(f[lk], 1.0) for lk in in_links[nid]] + sensed(nid)
        terms.append((x[nid], -big_m))
        b.row(terms, Sense.LE, 0.0, f"Eq9[{nid}]")

    if g:
        for nid in scenario.node_ids:
            if out_links[nid]:
                b.row([(g[lk], 1.0) for lk in out_links[nid]], Sense.LE, 1.0, f"Eq12[{nid}]")
        for lk in topo.links:
            b.row([(f[lk], 1.0), (g[lk], -big_m)], Sense.LE, 0.0, f"Eq13[{lk[0]},{lk[1]}]")

    # -- bandwidth sharing under interference ---------------------------------

    for n, lk in enumerate(topo.links):
        terms = [(f[lk], 1.0 / float(topo.capacity[n]))]
        for m in topo.interference_sets[n]:
            terms.append((f[topo.links[m]], 1.0 / float(topo.capacity[m])))
        b.row(terms, Sense.LE, 1.0, f"Eq15[{lk[0]},{lk[1]}]")

    # -- energy --------------------------------------------------------------

    rho = rx_energy_per_bit(radio)
    for nid in scenario.node_ids:
        terms = [
            (f[lk], tx_energy_per_bit(topo.distance_between(*lk), radio))
            for lk in out_links[nid]
        ]
        terms += [(f[lk], rho) for lk in in_links[nid]]
        terms += [(y[k], apps[k[1]].cpu_watts) for k in y_by_node[nid] if apps[k[1]].cpu_watts]
        if terms:
            budget = scenario.profile_of(nid).energy_j / scenario.lifetime_s
            b.row(terms, Sense.LE, budget, f"Eq18[{nid}]")

    # -- objective -----------------------------------------------------------

    objective = [(z[a.id], a.preference) for a in scenario.applications]
    objective += [
        (x[n.id], -n.activation_cost) for n in scenario.nodes if n.activation_cost
    ]

    model = MilpModel(
        variables=b.variables,
        constraints=tuple(b.constraints),
        objective=tuple(objective),
        index=b.index,
        mode=mode,
    )
    logger.info(
        "built %s model: %d variables, %d constraints",
        mode.name, model.n_vars, len(model.constraints),
    )
    return model
