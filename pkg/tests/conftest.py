"""Shared fixtures and scenario builders."""

from __future__ import annotations

from pathlib import Path
from typing import Any

import pytest

from vsn_alloc.model.solution import Solution, SolutionStatus
from vsn_alloc.scenario.generator import BEAGLEBONE, DEFAULT_PROFILES, SECONDS_PER_DAY, TELOSB
from vsn_alloc.scenario.loader import load_scenario
from vsn_alloc.scenario.models import (
    ApplicationKind,
    ApplicationSpec,
    Area,
    RadioParams,
    Scenario,
    SensorNode,
    TestPoint,
)

REPO_ROOT = Path(__file__).resolve().parent.parent
SINGLE_NODE = REPO_ROOT / "data" / "fixtures" / "single_node.json"
EXPERIMENTS = REPO_ROOT / "data" / "experiments"


def make_node(
    node_id: int,
    x: float,
    y: float,
    *,
    profile: str = TELOSB,
    is_sink: bool = False,
    **kw: Any,
) -> SensorNode:
    return SensorNode(id=node_id, x=x, y=y, profile=profile, is_sink=is_sink, **kw)


def make_app(
    app_id: int,
    points: list[tuple[float, float]],
    *,
    kind: ApplicationKind = ApplicationKind.TEMPERATURE,
    rate_bps: float = 500.0,
    memory_bits: float = 0.0,
    mips: float = 0.0,
    cpu_watts: float = 0.0,
    preference: float = 1.0,
    **kw: Any,
) -> ApplicationSpec:
    return ApplicationSpec(
        id=app_id,
        kind=kind,
        rate_bps=rate_bps,
        memory_bits=memory_bits,
        mips=mips,
        cpu_watts=cpu_watts,
        preference=preference,
        test_points=[TestPoint(id=k, x=x, y=y) for k, (x, y) in enumerate(points)],
        **kw,
    )


def make_scenario(
    nodes: list[SensorNode],
    apps: list[ApplicationSpec] | None = None,
    *,
    p_max_dbm: float = 0.0,
    lifetime_days: float = 1.0,
    width: float = 200.0,
    height: float = 200.0,
    big_m_bps: float = 2.5e6,
    profiles: dict | None = None,
) -> Scenario:
    return Scenario(
        area=Area(width=width, height=height),
        radio=RadioParams.from_dbm(p_max_dbm=p_max_dbm),
        lifetime_s=lifetime_days * SECONDS_PER_DAY,
        big_m_bps=big_m_bps,
        profiles=dict(profiles or DEFAULT_PROFILES),
        nodes=nodes,
        applications=apps or [],
    )


def make_chain(n: int, spacing: float = 40.0, apps: list[ApplicationSpec] | None = None) -> Scenario:
    """Motes on a horizontal line at y=100, the sink at the left end."""
    nodes = [make_node(i, 10.0 + i * spacing, 100.0, is_sink=(i == 0)) for i in range(n)]
    return make_scenario(nodes, apps)


@pytest.fixture
def single_node() -> Scenario:
    return load_scenario(SINGLE_NODE)


@pytest.fixture
def chain3() -> Scenario:
    """Sink 0 -- relay 1 -- mote 2, one temperature app sensed only by mote 2."""
    return make_chain(3, apps=[make_app(0, [(100.0, 100.0)])])


@pytest.fixture
def camera_pair() -> Scenario:
    """A BeagleBone sink and a BeagleBone camera 40 m away, one CTA app at the camera."""
    nodes = [
        make_node(0, 50.0, 50.0, profile=BEAGLEBONE, is_sink=True),
        make_node(1, 90.0, 50.0, profile=BEAGLEBONE),
    ]
    app = make_app(
        0,
        [(100.0, 50.0)],
        kind=ApplicationKind.CTA,
        rate_bps=20_000.0,
        memory_bits=8 * 1024**2,
        mips=17.64,
        cpu_watts=0.05,
        preference=12.0,
        allowed_profiles=[BEAGLEBONE],
    )
    return make_scenario(nodes, [app])


def make_chain3_solution() -> Solution:
    """Hand-built optimum of ``chain3``: mote 2 senses, relay 1 forwards."""
    values = {
        "z[0]": 1.0,
        "h[0,0]": 1.0,
        "y[2,0,0]": 1.0,
        "x[0]": 1.0,
        "x[1]": 1.0,
        "x[2]": 1.0,
        "f[0,1]": 0.0,
        "f[1,0]": 500.0,
        "f[1,2]": 0.0,
        "f[2,1]": 500.0,
    }
    return Solution(values=values, objective=0.97, status=SolutionStatus.OPTIMAL)
