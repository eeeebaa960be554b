"""Min-hop routing trees (DODAGs) rooted at the sink set."""

from __future__ import annotations

import logging

import networkx as nx
from pydantic import BaseModel, ConfigDict, Field

from vsn_alloc.errors import ScenarioLookupError

from .models import Scenario

logger = logging.getLogger(__name__)


class DodagRouting(BaseModel):
    """Parent pointers and hop counts of a min-hop forest toward the sinks."""

    model_config = ConfigDict(frozen=True, extra="forbid")

    parent: dict[int, int] = Field(default_factory=dict)
    """Next hop of every reachable non-sink node."""

    hop_count: dict[int, int] = Field(default_factory=dict)
    """Hops to the nearest sink; 0 for sinks, absent for unreachable nodes."""

    unreachable: list[int] = Field(default_factory=list)
    """Non-sink nodes with no viable path to any sink."""

    def parent_of(self, node_id: int) -> int | None:
        return self.parent.get(node_id)

    def is_tree_link(self, i: int, h: int) -> bool:
        return self.parent.get(i) == h

    def path_to_sink(self, node_id: int) -> list[int]:
        """Node ids from *node_id* up to (and including) its sink."""
        if node_id not in self.hop_count:
            raise ScenarioLookupError(f"node {node_id} is not routed to any sink")
        path = [node_id]
        while path[-1] in self.parent:
            path.append(self.parent[path[-1]])
        return path


def viable_link_graph(scenario: Scenario) -> nx.Graph:
    """Undirected graph of viable links; every node appears, even isolated."""
    graph = nx.Graph()
    graph.add_nodes_from(scenario.node_ids)
    graph.add_edges_from(scenario.topology.links)
    return graph


def build_dodag(scenario: Scenario) -> DodagRouting:
    """Breadth-first hop counts from the sinks and lowest-id min-hop parents.

    Each reachable non-sink picks, among its neighbours one hop closer to the
    sink set, the one with the smallest id.
    """
    graph = viable_link_graph(scenario)
    sinks = scenario.sink_ids
    hops: dict[int, int] = {
        node: int(dist)
        for node, dist in nx.multi_source_dijkstra_path_length(graph, sinks).items()
    }

    parent: dict[int, int] = {}
    for node in sorted(hops):
        if hops[node] == 0:
            continue
        parent[node] = min(
            nbr for nbr in graph.neighbors(node) if hops.get(nbr) == hops[node] - 1
        )

    unreachable = sorted(n for n in scenario.node_ids if n not in hops)
    if unreachable:
        logger.warning(
            "%d node(s) cannot reach a sink and are left out of routing: %s",
            len(unreachable), unreachable,
        )
    return DodagRouting(
        parent=parent,
        hop_count={n: hops[n] for n in sorted(hops)},
        unreachable=unreachable,
    )
