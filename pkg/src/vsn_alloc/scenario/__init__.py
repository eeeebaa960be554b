"""Physical world: nodes, applications, radio, coverage and routing trees."""

from .energy import (
    atc_cpu_time,
    cpu_energy_atc,
    cpu_energy_cta,
    cta_cpu_time,
    processing_load_mips,
    processing_power_w,
)
from .generator import (
    BEAGLEBONE,
    TELOSB,
    GenerationParams,
    PreferenceProfile,
    estimate_uncovered_probability,
    isolate,
    knapsack_scenario,
    merge_scenarios,
    random_scenario,
)
from .loader import load_scenario, save_scenario
from .models import (
    ApplicationKind,
    ApplicationSpec,
    Area,
    NodeProfile,
    Point2D,
    RadioParams,
    Scenario,
    SensorNode,
    TestPoint,
    dbm_to_mw,
    rebuild,
)
from .radio import interference_range, tx_range
from .routing import DodagRouting, build_dodag
from .topology import (
    Topology,
    coverage_set,
    interfering_links,
    link_capacity,
    link_viable,
    uncovered_fraction,
)

__all__ = [
    "ApplicationKind",
    "ApplicationSpec",
    "Area",
    "BEAGLEBONE",
    "DodagRouting",
    "GenerationParams",
    "NodeProfile",
    "Point2D",
    "PreferenceProfile",
    "RadioParams",
    "Scenario",
    "SensorNode",
    "TELOSB",
    "TestPoint",
    "Topology",
    "atc_cpu_time",
    "build_dodag",
    "coverage_set",
    "cpu_energy_atc",
    "cpu_energy_cta",
    "cta_cpu_time",
    "dbm_to_mw",
    "estimate_uncovered_probability",
    "interference_range",
    "interfering_links",
    "isolate",
    "knapsack_scenario",
    "link_capacity",
    "link_viable",
    "load_scenario",
    "merge_scenarios",
    "processing_load_mips",
    "processing_power_w",
    "random_scenario",
    "rebuild",
    "save_scenario",
    "tx_range",
    "uncovered_fraction",
]
