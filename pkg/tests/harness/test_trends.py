"""Seeded desk-scale suites checking the qualitative trends of the model."""

from __future__ import annotations

from collections import defaultdict
from statistics import fmean

import pytest

from vsn_alloc.harness.compare import compare_methods
from vsn_alloc.harness.io import load_spec
from vsn_alloc.harness.models import ExperimentSpec, MetricsRow
from vsn_alloc.harness.runner import VIRTUALIZATION_TAGS, run_experiment, run_virtualization
from vsn_alloc.model.builder import build_model
from vsn_alloc.model.milp import RoutingMode
from vsn_alloc.scenario.generator import GenerationParams, merge_scenarios, random_scenario
from vsn_alloc.scenario.models import ApplicationKind
from vsn_alloc.solver.bnb import solve_milp
from tests.conftest import EXPERIMENTS

pytestmark = pytest.mark.statistical

TOL = 1e-6


def _by_value(rows: list[MetricsRow]) -> dict[str, list[MetricsRow]]:
    grouped: dict[str, list[MetricsRow]] = defaultdict(list)
    for row in rows:
        grouped[str(row.sweep_value)].append(row)
    return grouped


def _with(spec: ExperimentSpec, **update) -> ExperimentSpec:
    return ExperimentSpec.model_validate({**spec.model_dump(), **update})


class TestRoutingOrdering:
    def test_rowwise_and_means(self) -> None:
        rows = run_experiment(load_spec(EXPERIMENTS / "routing.json"))
        assert all(r.status == "optimal" and r.violations == 0 for r in rows)
        per_seed: dict[int, dict[str, float]] = defaultdict(dict)
        for row in rows:
            per_seed[row.seed][str(row.sweep_value)] = row.objective
        for seed, obj in per_seed.items():
            assert obj["multipath"] >= obj["singlepath"] - TOL, seed
            assert obj["singlepath"] >= obj["static"] - TOL, seed
        means = {k: fmean(r.objective for r in v) for k, v in _by_value(rows).items()}
        assert means["singlepath"] >= 0.9 * means["multipath"]
        assert means["static"] >= 0.9 * means["multipath"]


class TestHeuristicGap:
    def test_desk_suite(self) -> None:
        rows = run_experiment(load_spec(EXPERIMENTS / "heuristic_gap.json"))
        assert all(r.violations == 0 for r in rows)
        summary = compare_methods(rows)
        assert not summary.missing
        assert 0.0 <= summary.mean_gap <= 0.15
        assert all(p.gap >= -TOL for p in summary.points)
        assert summary.heuristic_faster_fraction >= 0.9


class TestLifetime:
    def test_visual_apps_die_with_the_battery(self) -> None:
        # 32400 J lasts 1.875 days at 0.2 W (ATC) and 7.5 days at 0.05 W (CTA).
        # At the threshold itself only a sink breaks even, and every visual app
        # needs transmitting hosts besides the single camera sink.
        rows = run_experiment(load_spec(EXPERIMENTS / "lifetime.json"))
        assert all(r.violations == 0 for r in rows)
        grouped = _by_value(rows)
        assert sum(r.active_atc for r in grouped["1.0"]) > 0
        assert sum(r.active_cta for r in grouped["1.0"]) > 0
        for value, group in grouped.items():
            if float(value) >= 1.875:
                assert all(r.active_atc == 0 for r in group), value
            if float(value) >= 7.5:
                assert all(r.active_cta == 0 for r in group), value


class TestSweepTrends:
    def test_more_sinks_never_hurt(self) -> None:
        spec = _with(load_spec(EXPERIMENTS / "n_sinks.json"), replications=10)
        per_seed: dict[int, list[float]] = defaultdict(list)
        for row in run_experiment(spec):
            assert row.status == "optimal"
            per_seed[row.seed].append(row.objective)
        for seed, objs in per_seed.items():
            assert all(b >= a - TOL for a, b in zip(objs, objs[1:])), seed

    def test_offering_more_apps(self) -> None:
        spec = _with(load_spec(EXPERIMENTS / "offered_apps.json"), replications=10)
        grouped = _by_value(run_experiment(spec))
        means = [
            fmean(r.active_scalar_apps for r in grouped[str(float(v))])
            for v in spec.sweep_values
        ]
        assert all(b >= a for a, b in zip(means, means[1:]))


class TestVirtualizationGain:
    def test_merged_networks_do_at_least_as_well(self) -> None:
        params = GenerationParams(
            n_scalar=6,
            n_multimedia=0,
            n_sinks_multimedia=0,
            apps_per_kind=1,
            kinds=[ApplicationKind.TEMPERATURE, ApplicationKind.LIGHT],
            test_points_scalar=3,
            area_width_m=120.0,
            area_height_m=120.0,
        )
        mode = RoutingMode.multipath()
        gains = []
        for seed in range(20):
            a = random_scenario(seed, params)
            b = random_scenario(1000 + seed, params)
            alone = sum(
                solve_milp(build_model(s, mode)).solution.objective for s in (a, b)
            )
            joint = solve_milp(build_model(merge_scenarios(a, b), mode)).solution.objective
            assert joint >= alone - TOL, seed
            gains.append(joint - alone)
        assert max(gains) > TOL

    def test_joint_network_dominates_its_slices(self) -> None:
        params = GenerationParams(n_scalar=8, n_multimedia=6, apps_per_kind=1)
        rows = run_virtualization(params, list(range(5)))
        for k in range(0, len(rows), len(VIRTUALIZATION_TAGS)):
            scalar, visual, joint = rows[k : k + 3]
            assert joint.objective >= max(scalar.objective, visual.objective) - TOL
