"""Geometry derived from a scenario: viable links, interference and coverage.

All transmissions are assumed to use the maximum power of the radio, so the
decode and interference ranges are the same for every node.  Node ids are
mapped to dense row positions once; every per-link array is indexed by the
position of the link in :attr:`Topology.links`, which is sorted by
``(transmitter id, receiver id)``.
"""

from __future__ import annotations

import logging
from functools import cached_property
from typing import TYPE_CHECKING

import numpy as np

from vsn_alloc.errors import DomainError, ScenarioLookupError

from .radio import max_interference_range, max_tx_range

if TYPE_CHECKING:
    from .models import Scenario

logger = logging.getLogger(__name__)

Link = tuple[int, int]

# Slack on the inclusive sensing boundary.
COVERAGE_EPS = 1e-9


class Topology:
    """Precomputed distances, links and coverage sets for one scenario."""

    def __init__(self, scenario: Scenario) -> None:
        self.node_ids: tuple[int, ...] = tuple(n.id for n in scenario.nodes)
        self.position_of: dict[int, int] = {
            nid: pos for pos, nid in enumerate(self.node_ids)
        }
        coords = np.array([[n.x, n.y] for n in scenario.nodes], dtype=float)
        self.coords = coords.reshape(-1, 2)

        delta = self.coords[:, None, :] - self.coords[None, :, :]
        self.distance: np.ndarray = np.hypot(delta[..., 0], delta[..., 1])

        self.tx_range = max_tx_range(scenario.radio)
        self.interference_range = max_interference_range(scenario.radio)

        viable = self.distance <= self.tx_range
        np.fill_diagonal(viable, False)
        self.viable: np.ndarray = viable

        bandwidth = np.array(
            [scenario.profiles[n.profile].bandwidth_bps for n in scenario.nodes],
            dtype=float,
        )
        pairs = sorted(
            (self.node_ids[a], self.node_ids[b]) for a, b in np.argwhere(viable)
        )
        self.links: list[Link] = pairs
        self.link_index: dict[Link, int] = {lk: n for n, lk in enumerate(pairs)}
        self._tx = np.array([self.position_of[i] for i, _ in pairs], dtype=int)
        self._rx = np.array([self.position_of[h] for _, h in pairs], dtype=int)
        self.capacity: np.ndarray = (
            np.minimum(bandwidth[self._tx], bandwidth[self._rx])
            if pairs else np.zeros(0)
        )

        self.coverage: dict[tuple[int, int], tuple[int, ...]] = self._coverage_sets(
            scenario
        )
        logger.debug(
            "topology: %d nodes, %d viable links, R_T=%.2f m, R_I=%.2f m",
            len(self.node_ids), len(pairs), self.tx_range, self.interference_range,
        )

    # -- coverage ----------------------------------------------------------

    def _coverage_sets(self, scenario: Scenario) -> dict[tuple[int, int], tuple[int, ...]]:
        sensing = np.array([n.sensing_range_m for n in scenario.nodes], dtype=float)
        out: dict[tuple[int, int], tuple[int, ...]] = {}
        for app in scenario.applications:
            hostable = np.array(
                [app.can_run_on(n.profile) for n in scenario.nodes], dtype=bool
            )
            for tp in app.test_points:
                d = np.hypot(self.coords[:, 0] - tp.x, self.coords[:, 1] - tp.y)
                inside = (d <= sensing + COVERAGE_EPS) & hostable
                out[(app.id, tp.id)] = tuple(
                    sorted(self.node_ids[p] for p in np.flatnonzero(inside))
                )
        return out

    def covering_nodes(self, app_id: int, tp_id: int) -> tuple[int, ...]:
        try:
            return self.coverage[(app_id, tp_id)]
        except KeyError:
            raise ScenarioLookupError(
                f"unknown test point {tp_id} of application {app_id}"
            ) from None

    # -- links -------------------------------------------------------------

    def _pos(self, node_id: int) -> int:
        try:
            return self.position_of[node_id]
        except KeyError:
            raise ScenarioLookupError(f"unknown node id {node_id}") from None

    def distance_between(self, i: int, h: int) -> float:
        return float(self.distance[self._pos(i), self._pos(h)])

    def is_viable(self, i: int, h: int) -> bool:
        if i == h:
            raise DomainError(f"a link needs two distinct nodes, got ({i}, {h})")
        return bool(self.viable[self._pos(i), self._pos(h)])

    def _require_link(self, i: int, h: int) -> int:
        if not self.is_viable(i, h):
            raise DomainError(f"link ({i}, {h}) is not viable")
        return self.link_index[(i, h)]

    def capacity_of(self, i: int, h: int) -> float:
        return float(self.capacity[self._require_link(i, h)])

    def out_links(self, i: int) -> list[Link]:
        return [lk for lk in self.links if lk[0] == i]

    def in_links(self, h: int) -> list[Link]:
        return [lk for lk in self.links if lk[1] == h]

    @cached_property
    def interference_sets(self) -> list[np.ndarray]:
        """For every link, the sorted indices of the links it competes with.

        A link (g, t) competes with (i, h) when it shares an endpoint with it
        (other than being (i, h) itself), when its receiver t is within the
        interference range of i, or when its transmitter g is within the
        interference range of h.  Each competitor appears once.
        """
        tx, rx = self._tx, self._rx
        r_i = self.interference_range
        sets: list[np.ndarray] = []
        for n in range(len(self.links)):
            a, b = tx[n], rx[n]
            mask = (
                ((tx == a) & (rx != b))
                | (rx == a)
                | ((tx == b) & (rx != a))
                | ((rx == b) & (tx != a))
                | (self.distance[a, rx] < r_i)
                | (self.distance[tx, b] < r_i)
            )
            mask[n] = False
            sets.append(np.flatnonzero(mask))
        return sets

    def interfering(self, i: int, h: int) -> set[Link]:
        n = self._require_link(i, h)
        return {self.links[m] for m in self.interference_sets[n]}


# ---------------------------------------------------------------------------
# Functional surface
# ---------------------------------------------------------------------------

def coverage_set(scenario: Scenario, app_id: int, tp_id: int) -> set[int]:
    """Nodes that sense test point *tp_id* of *app_id* and can host the app."""
    scenario.application(app_id).test_point(tp_id)
    return set(scenario.topology.covering_nodes(app_id, tp_id))


def link_viable(scenario: Scenario, i: int, h: int) -> bool:
    return scenario.topology.is_viable(i, h)


def link_capacity(scenario: Scenario, i: int, h: int) -> float:
    """min(C_i, C_h) for a viable link."""
    return scenario.topology.capacity_of(i, h)


def interfering_links(scenario: Scenario, link: Link) -> set[Link]:
    return scenario.topology.interfering(*link)


def uncovered_fraction(scenario: Scenario) -> float:
    """Share of all test points whose coverage set is empty."""
    sets = scenario.topology.coverage
    if not sets:
        return 0.0
    return sum(1 for nodes in sets.values() if not nodes) / len(sets)
