"""Scenario records -- the immutable description of a physical sensor network.

A :class:`Scenario` bundles the deployment area, the radio and energy
parameters, the node population with its hardware profiles, and the
applications competing for it.  Everything derived from it (distances,
viable links, interference sets, coverage sets) lives on
:attr:`Scenario.topology`, computed once on first access.
"""

from __future__ import annotations

import math
from enum import Enum
from functools import cached_property
from typing import TYPE_CHECKING

from pydantic import BaseModel, ConfigDict, Field, model_validator

from vsn_alloc.errors import ScenarioLookupError

if TYPE_CHECKING:
    from .topology import Topology


_FROZEN = ConfigDict(frozen=True, extra="forbid")


def dbm_to_mw(dbm: float) -> float:
    """Convert a power level in dBm to milliwatts."""
    return 10.0 ** (dbm / 10.0)


# ---------------------------------------------------------------------------
# Geometry
# ---------------------------------------------------------------------------

class Point2D(BaseModel):
    """A position in meters."""

    model_config = _FROZEN

    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)

    def distance_to(self, other: Point2D) -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


class Area(BaseModel):
    """Rectangular deployment area anchored at the origin."""

    model_config = _FROZEN

    width: float = Field(gt=0)
    height: float = Field(gt=0)

    def contains(self, x: float, y: float) -> bool:
        return 0.0 <= x <= self.width and 0.0 <= y <= self.height


# ---------------------------------------------------------------------------
# Hardware
# ---------------------------------------------------------------------------

class NodeProfile(BaseModel):
    """Resource vector of a class of sensor node.

    The profile name is the key under which it is stored in
    :attr:`Scenario.profiles`.
    """

    model_config = _FROZEN

    bandwidth_bps: float = Field(gt=0)
    """Radio bandwidth C_i in bits/second."""

    memory_bits: float = Field(gt=0)
    """Memory M_i available to applications, in bits."""

    mips: float = Field(gt=0)
    """Processing capacity L_i in MIPS."""

    energy_j: float = Field(gt=0)
    """Battery budget E_i in joules."""

    multimedia: bool = False
    """Marks camera-equipped profiles; only used for reporting node counts."""


class SensorNode(BaseModel):
    """A physical node placed in the area."""

    model_config = _FROZEN

    id: int = Field(ge=0)
    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)
    profile: str
    """Key into :attr:`Scenario.profiles`."""

    is_sink: bool = False
    sensing_range_m: float = Field(default=30.0, gt=0)
    activation_cost: float = Field(default=0.01, ge=0)
    """delta_i, revenue lost by switching the node on."""

    @property
    def position(self) -> Point2D:
        return Point2D(x=self.x, y=self.y)


# ---------------------------------------------------------------------------
# Applications
# ---------------------------------------------------------------------------

class ApplicationKind(str, Enum):
    TEMPERATURE = "temperature"
    LIGHT = "light"
    CTA = "cta"
    ATC = "atc"
    CUSTOM = "custom"

    @property
    def is_visual(self) -> bool:
        return self in (ApplicationKind.CTA, ApplicationKind.ATC)


class TestPoint(BaseModel):
    """A location an application needs sensed."""

    __test__ = False  # keep pytest from collecting this class

    model_config = _FROZEN

    id: int = Field(ge=0)
    x: float = Field(allow_inf_nan=False)
    y: float = Field(allow_inf_nan=False)

    @property
    def position(self) -> Point2D:
        return Point2D(x=self.x, y=self.y)


class ApplicationSpec(BaseModel):
    """An application offered for deployment on the shared network."""

    model_config = _FROZEN

    id: int = Field(ge=0)
    kind: ApplicationKind
    rate_bps: float = Field(gt=0)
    """Source rate c_j generated per covered test point."""

    memory_bits: float = Field(ge=0)
    """Memory m_j consumed per test point a node senses."""

    mips: float = Field(ge=0)
    """Processing load l_j per sensed test point."""

    cpu_watts: float = Field(ge=0)
    """Processing power drawn per sensed test point (enters the energy row)."""

    preference: float = Field(gt=0)
    """Revenue q_j earned when the application is deployed."""

    allowed_profiles: list[str] = Field(default_factory=list)
    """Profiles able to host the application.  Empty means every profile."""

    per_node_cap: int = Field(default=1, ge=1)
    """N_ij: how many of this application's test points one node may sense."""

    test_points: list[TestPoint] = Field(min_length=1)

    @model_validator(mode="after")
    def _unique_test_points(self) -> ApplicationSpec:
        ids = [tp.id for tp in self.test_points]
        if len(ids) != len(set(ids)):
            raise ValueError(f"application {self.id}: duplicate test point ids")
        return self

    def can_run_on(self, profile: str) -> bool:
        return not self.allowed_profiles or profile in self.allowed_profiles

    def test_point(self, k: int) -> TestPoint:
        for tp in self.test_points:
            if tp.id == k:
                return tp
        raise ScenarioLookupError(f"application {self.id} has no test point {k}")

    @property
    def offered_rate_bps(self) -> float:
        """Traffic generated when the application is deployed (|T_j| * c_j)."""
        return len(self.test_points) * self.rate_bps


# ---------------------------------------------------------------------------
# Radio
# ---------------------------------------------------------------------------

class RadioParams(BaseModel):
    """Propagation and radio energy constants, stored in mW and J/bit."""

    model_config = _FROZEN

    p_max_mw: float = Field(gt=0)
    rx_threshold_mw: float = Field(gt=0)
    """alpha: weakest decodable received power."""

    interference_threshold_mw: float = Field(gt=0)
    """beta: weakest received power that still disturbs a receiver."""

    path_loss_exponent: float = Field(default=4.0, gt=0)
    antenna_gain: float = Field(default=8.1e-3, gt=0)
    tx_energy_base_j_per_bit: float = Field(default=5e-8, gt=0)
    tx_energy_dist_j_per_bit_m: float = Field(default=1.3e-15, gt=0)
    """Distance-dependent transmit energy, J/bit/m^gamma."""

    rx_energy_j_per_bit: float = Field(default=5e-8, gt=0)

    @model_validator(mode="after")
    def _interference_below_decode(self) -> RadioParams:
        if not self.interference_threshold_mw < self.rx_threshold_mw:
            raise ValueError(
                "interference_threshold_mw must be below rx_threshold_mw"
            )
        return self

    @classmethod
    def from_dbm(
        cls,
        p_max_dbm: float = 0.0,
        rx_threshold_dbm: float = -92.0,
        interference_threshold_dbm: float = -104.0,
        **overrides: float,
    ) -> RadioParams:
        """Build radio parameters from dBm levels (CC2420-class defaults)."""
        return cls(
            p_max_mw=dbm_to_mw(p_max_dbm),
            rx_threshold_mw=dbm_to_mw(rx_threshold_dbm),
            interference_threshold_mw=dbm_to_mw(interference_threshold_dbm),
            **overrides,
        )


# ---------------------------------------------------------------------------
# Scenario
# ---------------------------------------------------------------------------

class Scenario(BaseModel):
    """Immutable world description consumed by the model builder and solvers."""

    model_config = _FROZEN

    area: Area
    radio: RadioParams
    lifetime_s: float = Field(gt=0)
    """Minimum network lifetime L the energy rows must guarantee."""

    big_m_bps: float = Field(gt=0)
    """K in the activation constraint; must exceed every node bandwidth."""

    profiles: dict[str, NodeProfile]
    nodes: list[SensorNode]
    applications: list[ApplicationSpec] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_consistency(self) -> Scenario:
        node_ids = [n.id for n in self.nodes]
        if len(node_ids) != len(set(node_ids)):
            raise ValueError("node ids must be unique")
        app_ids = [a.id for a in self.applications]
        if len(app_ids) != len(set(app_ids)):
            raise ValueError("application ids must be unique")
        if not any(n.is_sink for n in self.nodes):
            raise ValueError("scenario needs at least one sink node")

        for node in self.nodes:
            if node.profile not in self.profiles:
                raise ValueError(f"node {node.id}: unknown profile {node.profile!r}")
            if not self.area.contains(node.x, node.y):
                raise ValueError(f"node {node.id} lies outside the area")
        for app in self.applications:
            for name in app.allowed_profiles:
                if name not in self.profiles:
                    raise ValueError(f"application {app.id}: unknown profile {name!r}")
            for tp in app.test_points:
                if not self.area.contains(tp.x, tp.y):
                    raise ValueError(
                        f"application {app.id}: test point {tp.id} lies outside the area"
                    )

        max_bw = max(p.bandwidth_bps for p in self.profiles.values())
        if not self.big_m_bps > max_bw:
            raise ValueError(
                f"big_m_bps ({self.big_m_bps}) must exceed the largest "
                f"node bandwidth ({max_bw})"
            )
        return self

    # -- lookups -----------------------------------------------------------

    def node(self, node_id: int) -> SensorNode:
        try:
            return self.nodes[self._node_pos[node_id]]
        except KeyError:
            raise ScenarioLookupError(f"unknown node id {node_id}") from None

    def application(self, app_id: int) -> ApplicationSpec:
        try:
            return self.applications[self._app_pos[app_id]]
        except KeyError:
            raise ScenarioLookupError(f"unknown application id {app_id}") from None

    def profile_of(self, node_id: int) -> NodeProfile:
        return self.profiles[self.node(node_id).profile]

    @property
    def sink_ids(self) -> list[int]:
        return [n.id for n in self.nodes if n.is_sink]

    @property
    def node_ids(self) -> list[int]:
        return [n.id for n in self.nodes]

    @cached_property
    def _node_pos(self) -> dict[int, int]:
        return {n.id: pos for pos, n in enumerate(self.nodes)}

    @cached_property
    def _app_pos(self) -> dict[int, int]:
        return {a.id: pos for pos, a in enumerate(self.applications)}

    @cached_property
    def topology(self) -> Topology:
        """Derived geometry: distances, links, interference and coverage."""
        from .topology import Topology

        return Topology(self)


def rebuild(scenario: Scenario, **changes: object) -> Scenario:
    """Copy of *scenario* with *changes* applied and fully re-validated.

    Unlike ``model_copy(update=...)`` this drops cached derived geometry.
    """
    data = {name: getattr(scenario, name) for name in Scenario.model_fields}
    data.update(changes)
    return Scenario.model_validate(data)
