"""Randomised scenario generation and scenario surgery.

Provides:

- **GenerationParams** / **random_scenario**: seeded two-technology networks
  (TelosB scalar motes plus BeagleBone camera nodes) with the four reference
  application kinds.
- **knapsack_scenario**: the restricted instance family in which the
  allocation problem collapses to a multi-knapsack over node memory.
- **isolate** / **merge_scenarios**: carve a single-technology network out of
  a joint one, or join two disjoint networks into one.
- **estimate_uncovered_probability**: Monte-Carlo coverage statistics.
"""

from __future__ import annotations

import logging
from enum import Enum
from typing import Any, Iterable

from pydantic import BaseModel, ConfigDict, Field

from vsn_alloc.errors import ConfigurationError
from vsn_alloc.rng import SeededRNG

from .energy import (
    atc_cpu_time,
    cpu_energy_atc,
    cpu_energy_cta,
    cta_cpu_time,
    processing_load_mips,
    processing_power_w,
)
from .models import (
    ApplicationKind,
    ApplicationSpec,
    Area,
    NodeProfile,
    RadioParams,
    Scenario,
    SensorNode,
    TestPoint,
    rebuild,
)
from .topology import uncovered_fraction

logger = logging.getLogger(__name__)

SECONDS_PER_DAY = 86_400.0

TELOSB = "telosb"
BEAGLEBONE = "beaglebone"

# =====================================================================
# Reference hardware and applications
# =====================================================================

DEFAULT_PROFILES: dict[str, NodeProfile] = {
    TELOSB: NodeProfile(
        bandwidth_bps=250e3,
        memory_bits=7 * 1024 * 8,
        mips=8.0,
        energy_j=32_400.0,
    ),
    BEAGLEBONE: NodeProfile(
        bandwidth_bps=250e3,
        memory_bits=256 * 1024**2 * 8,
        mips=720.0,
        energy_j=32_400.0,
        multimedia=True,
    ),
}

VISUAL_FRAME_RATE_HZ = 1.0
VISUAL_MEMORY_BITS = 8 * 1024**2  # 1 MB; never binding on a 256 MB board


class PreferenceProfile(str, Enum):
    """How application revenues q_j are assigned."""

    UNIFORM = "uniform"
    """Every application is worth 1."""

    BANDWIDTH = "bandwidth"
    """Revenue roughly proportional to offered bandwidth."""


_PREFERENCES: dict[PreferenceProfile, dict[ApplicationKind, float]] = {
    PreferenceProfile.UNIFORM: {
        ApplicationKind.TEMPERATURE: 1.0,
        ApplicationKind.LIGHT: 1.0,
        ApplicationKind.CTA: 1.0,
        ApplicationKind.ATC: 1.0,
    },
    PreferenceProfile.BANDWIDTH: {
        ApplicationKind.TEMPERATURE: 1.0,
        ApplicationKind.LIGHT: 1.0,
        ApplicationKind.CTA: 12.0,
        ApplicationKind.ATC: 8.0,
    },
}


def reference_requirements(kind: ApplicationKind) -> dict[str, Any]:
    """Rate, memory, processing and power of the reference application *kind*.

    The visual figures are derived from the per-image CPU models on a
    720 MIPS camera node at one query per second.
    """
    if kind is ApplicationKind.TEMPERATURE:
        return {"rate_bps": 500.0, "memory_bits": 4462 * 8, "mips": 0.0, "cpu_watts": 0.0}
    if kind is ApplicationKind.LIGHT:
        return {"rate_bps": 1000.0, "memory_bits": 1006 * 8, "mips": 0.0, "cpu_watts": 0.0}

    node_mips = DEFAULT_PROFILES[BEAGLEBONE].mips
    if kind is ApplicationKind.CTA:
        rate = 20_000.0
        t_cpu = cta_cpu_time(rate)
        energy = cpu_energy_cta(rate)
    elif kind is ApplicationKind.ATC:
        rate = 12_000.0
        t_cpu = atc_cpu_time(rate)
        energy = cpu_energy_atc(rate)
    else:
        raise ConfigurationError(f"no reference requirements for {kind.value!r}")
    return {
        "rate_bps": rate,
        "memory_bits": float(VISUAL_MEMORY_BITS),
        "mips": round(processing_load_mips(t_cpu, VISUAL_FRAME_RATE_HZ, node_mips), 2),
        "cpu_watts": round(processing_power_w(energy, VISUAL_FRAME_RATE_HZ), 2),
    }


# =====================================================================
# Generation parameters
# =====================================================================

class GenerationParams(BaseModel):
    """Knobs of :func:`random_scenario`.  Defaults are desk scale."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    n_scalar: int = Field(default=12, ge=0)
    """TelosB motes."""

    n_multimedia: int = Field(default=12, ge=0)
    """BeagleBone camera nodes."""

    n_sinks_scalar: int = Field(default=1, ge=0)
    n_sinks_multimedia: int = Field(default=1, ge=0)

    apps_per_kind: int = Field(default=1, ge=0)
    kinds: list[ApplicationKind] = Field(
        default_factory=lambda: [
            ApplicationKind.TEMPERATURE,
            ApplicationKind.LIGHT,
            ApplicationKind.CTA,
            ApplicationKind.ATC,
        ]
    )
    test_points_scalar: int = Field(default=5, ge=1)
    test_points_visual: int = Field(default=3, ge=1)

    area_width_m: float = Field(default=200.0, gt=0)
    area_height_m: float = Field(default=200.0, gt=0)
    p_max_dbm: float = 0.0
    lifetime_days: float = Field(default=1.0, gt=0)
    sensing_range_m: float = Field(default=30.0, gt=0)
    activation_cost: float = Field(default=0.01, ge=0)
    per_node_cap: int = Field(default=1, ge=1)
    preference: PreferenceProfile = PreferenceProfile.BANDWIDTH
    big_m_factor: float = Field(default=10.0, gt=1.0)
    """K as a multiple of the largest node bandwidth."""

    @property
    def n_nodes(self) -> int:
        return self.n_scalar + self.n_multimedia


# =====================================================================
# Random scenarios
# =====================================================================

def _place(rng: SeededRNG, area: Area) -> tuple[float, float]:
    return rng.uniform(0.0, area.width), rng.uniform(0.0, area.height)


def random_scenario(
    seed: int,
    params: GenerationParams | None = None,
    **overrides: Any,
) -> Scenario:
    """Generate a reproducible two-technology scenario.

    Parameters
    ----------
    seed:
        Master seed.  Node placement, sink choice and applications draw from
        separate forks, so changing e.g. the number of sinks leaves the node
        layout untouched and yields superset sink sets.
    params:
        Generation knobs; defaults to :class:`GenerationParams()`.
    **overrides:
        Field overrides applied on top of *params*.

    Raises
    ------
    ConfigurationError
        If no sink would be placed or a sink count exceeds its node count.
    """
    params = params or GenerationParams()
    if overrides:
        params = params.model_validate({**params.model_dump(), **overrides})

    if params.n_sinks_scalar > params.n_scalar:
        raise ConfigurationError(
            f"{params.n_sinks_scalar} scalar sinks requested for {params.n_scalar} motes"
        )
    if params.n_sinks_multimedia > params.n_multimedia:
        raise ConfigurationError(
            f"{params.n_sinks_multimedia} multimedia sinks requested "
            f"for {params.n_multimedia} nodes"
        )
    if params.n_sinks_scalar + params.n_sinks_multimedia == 0:
        raise ConfigurationError("a scenario needs at least one sink")

    rng = SeededRNG(seed)
    area = Area(width=params.area_width_m, height=params.area_height_m)

    # Scalar motes take ids 0..n_scalar-1, camera nodes follow.
    scalar_ids = list(range(params.n_scalar))
    mm_ids = list(range(params.n_scalar, params.n_nodes))
    sink_rng = rng.fork("sinks")
    sinks = set(sink_rng.permutation(scalar_ids)[: params.n_sinks_scalar])
    sinks |= set(sink_rng.permutation(mm_ids)[: params.n_sinks_multimedia])

    node_rng = rng.fork("nodes")
    nodes: list[SensorNode] = []
    for nid in scalar_ids + mm_ids:
        x, y = _place(node_rng, area)
        nodes.append(
            SensorNode(
                id=nid,
                x=x,
                y=y,
                profile=TELOSB if nid < params.n_scalar else BEAGLEBONE,
                is_sink=nid in sinks,
                sensing_range_m=params.sensing_range_m,
                activation_cost=params.activation_cost,
            )
        )

    app_rng = rng.fork("apps")
    applications: list[ApplicationSpec] = []
    preferences = _PREFERENCES[params.preference]
    for kind in params.kinds:
        n_tp = params.test_points_visual if kind.is_visual else params.test_points_scalar
        for _ in range(params.apps_per_kind):
            app_id = len(applications)
            test_points = [
                TestPoint(id=k, x=x, y=y)
                for k, (x, y) in enumerate(_place(app_rng, area) for _ in range(n_tp))
            ]
            applications.append(
                ApplicationSpec(
                    id=app_id,
                    kind=kind,
                    preference=preferences.get(kind, 1.0),
                    allowed_profiles=[BEAGLEBONE] if kind.is_visual else [],
                    per_node_cap=params.per_node_cap,
                    test_points=test_points,
                    **reference_requirements(kind),
                )
            )

    profiles = dict(DEFAULT_PROFILES)
    max_bw = max(p.bandwidth_bps for p in profiles.values())
    scenario = Scenario(
        area=area,
        radio=RadioParams.from_dbm(p_max_dbm=params.p_max_dbm),
        lifetime_s=params.lifetime_days * SECONDS_PER_DAY,
        big_m_bps=params.big_m_factor * max_bw,
        profiles=profiles,
        nodes=nodes,
        applications=applications,
    )
    logger.debug(
        "generated scenario seed=%d: %d nodes (%d sinks), %d applications",
        seed, len(nodes), len(sinks), len(applications),
    )
    return scenario


# =====================================================================
# Restricted multi-knapsack family
# =====================================================================

def knapsack_scenario(
    seed: int,
    n_nodes: int = 3,
    n_apps: int = 5,
    max_weight: int = 10,
    max_value: int = 10,
) -> Scenario:
    """Instance in which deployment reduces to a multi-knapsack over memory.

    Every node is a sink, activation is free, all applications share one test
    point that every node covers, and processing and energy never bind.  The
    only coupling left is each node's memory.
    """
    if n_nodes < 1:
        raise ConfigurationError("knapsack scenarios need at least one node")
    rng = SeededRNG(seed)
    area = Area(width=100.0, height=100.0)
    cx, cy = area.width / 2, area.height / 2

    node_rng = rng.fork("nodes")
    profiles: dict[str, NodeProfile] = {}
    nodes: list[SensorNode] = []
    for nid in range(n_nodes):
        name = f"bin{nid}"
        profiles[name] = NodeProfile(
            bandwidth_bps=250e3,
            memory_bits=float(node_rng.random_int(max_weight, 3 * max_weight)),
            mips=8.0,
            energy_j=32_400.0,
        )
        nodes.append(
            SensorNode(
                id=nid,
                x=cx + node_rng.uniform(-5.0, 5.0),
                y=cy + node_rng.uniform(-5.0, 5.0),
                profile=name,
                is_sink=True,
                sensing_range_m=30.0,
                activation_cost=0.0,
            )
        )

    app_rng = rng.fork("apps")
    applications = [
        ApplicationSpec(
            id=j,
            kind=ApplicationKind.CUSTOM,
            rate_bps=1.0,
            memory_bits=float(app_rng.random_int(1, max_weight)),
            mips=0.0,
            cpu_watts=0.0,
            preference=float(app_rng.random_int(1, max_value)),
            test_points=[TestPoint(id=0, x=cx, y=cy)],
        )
        for j in range(n_apps)
    ]
    return Scenario(
        area=area,
        radio=RadioParams.from_dbm(),
        lifetime_s=SECONDS_PER_DAY,
        big_m_bps=2.5e6,
        profiles=profiles,
        nodes=nodes,
        applications=applications,
    )


# =====================================================================
# Scenario surgery
# =====================================================================

def isolate(
    scenario: Scenario,
    profiles: Iterable[str],
    kinds: Iterable[ApplicationKind],
) -> Scenario:
    """Single-technology sub-network: nodes of *profiles*, apps of *kinds*.

    Raises
    ------
    ConfigurationError
        If none of the kept nodes is a sink.
    """
    keep_profiles = set(profiles)
    keep_kinds = set(kinds)
    nodes = [n for n in scenario.nodes if n.profile in keep_profiles]
    if not any(n.is_sink for n in nodes):
        raise ConfigurationError(
            f"isolating profiles {sorted(keep_profiles)} leaves no sink"
        )
    apps = [a for a in scenario.applications if a.kind in keep_kinds]
    return rebuild(scenario, nodes=nodes, applications=apps)


def merge_scenarios(a: Scenario, b: Scenario) -> Scenario:
    """Union of two disjoint networks sharing one area.

    Node and application ids of *b* are shifted past those of *a*.  Radio
    parameters and lifetime must agree; profiles with the same name must be
    identical.
    """
    if a.radio != b.radio:
        raise ConfigurationError("cannot merge scenarios with different radios")
    if a.lifetime_s != b.lifetime_s:
        raise ConfigurationError("cannot merge scenarios with different lifetimes")
    profiles = dict(a.profiles)
    for name, prof in b.profiles.items():
        if name in profiles and profiles[name] != prof:
            raise ConfigurationError(f"profile {name!r} differs between scenarios")
        profiles[name] = prof

    node_shift = max(a.node_ids) + 1
    app_shift = max((app.id for app in a.applications), default=-1) + 1
    nodes = list(a.nodes) + [
        n.model_copy(update={"id": n.id + node_shift}) for n in b.nodes
    ]
    apps = list(a.applications) + [
        app.model_copy(update={"id": app.id + app_shift}) for app in b.applications
    ]
    return Scenario(
        area=Area(
            width=max(a.area.width, b.area.width),
            height=max(a.area.height, b.area.height),
        ),
        radio=a.radio,
        lifetime_s=a.lifetime_s,
        big_m_bps=max(a.big_m_bps, b.big_m_bps),
        profiles=profiles,
        nodes=nodes,
        applications=apps,
    )


# =====================================================================
# Coverage statistics
# =====================================================================

def estimate_uncovered_probability(
    n_nodes: int = 36,
    trials: int = 1000,
    base_seed: int = 0,
    test_points: int = 5,
    params: GenerationParams | None = None,
) -> float:
    """Fraction of scalar test points no mote senses, over *trials* seeds.

    Only TelosB motes are generated, with one sink among them.
    """
    if trials < 1:
        raise ConfigurationError("trials must be >= 1")
    base = (params or GenerationParams()).model_copy(
        update={
            "n_scalar": n_nodes,
            "n_multimedia": 0,
            "n_sinks_scalar": 1,
            "n_sinks_multimedia": 0,
            "apps_per_kind": 1,
            "kinds": [ApplicationKind.TEMPERATURE],
            "test_points_scalar": test_points,
        }
    )
    total = 0.0
    for t in range(trials):
        total += uncovered_fraction(random_scenario(base_seed + t, base))
    return total / trials
