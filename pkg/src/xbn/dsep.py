"""d-separation via the linear-time active-trail reachability algorithm.

Walks the graph over (node, direction) states: a trail stays active
through a chain or fork unless the middle node is observed, and through a
collider only when the collider or one of its descendants is observed.
Two sets are d-separated given Z exactly when no node of Y is reachable
from X along an active trail.
"""

from __future__ import annotations

from collections import deque
from typing import Iterable

from .errors import QueryError
from .model import BayesianNetwork

_UP = 0     # arrived at the node from one of its children
_DOWN = 1   # arrived at the node from one of its parents


def d_separated(
    net: BayesianNetwork,
    x: Iterable[str],
    y: Iterable[str],
    z: Iterable[str] = (),
) -> bool:
    """True iff every undirected path between ``x`` and ``y`` is blocked by ``z``."""
    xs = {net.variable(v).name for v in x}
    ys = {net.variable(v).name for v in y}
    zs = {net.variable(v).name for v in z}
    if not xs or not ys:
        raise QueryError("d-separation needs nonempty X and Y sets")
    if xs & ys or xs & zs or ys & zs:
        raise QueryError("X, Y and Z must be pairwise disjoint")
    return not (_reachable(net, xs, zs) & ys)


def _reachable(net: BayesianNetwork, sources: set[str], observed: set[str]) -> set[str]:
    """Nodes reachable from ``sources`` along trails active given ``observed``."""
    # Ancestors of observed nodes activate colliders.
    anc_of_obs: set[str] = set()
    stack = list(observed)
    while stack:
        v = stack.pop()
        if v not in anc_of_obs:
            anc_of_obs.add(v)
            stack.extend(net.parents(v))

    visited: set[tuple[str, int]] = set()
    reached: set[str] = set()
    queue: deque[tuple[str, int]] = deque((s, _UP) for s in sources)
    while queue:
        node, direction = queue.popleft()
        if (node, direction) in visited:
            continue
        visited.add((node, direction))
        if node not in observed:
            reached.add(node)

        if direction == _UP and node not in observed:
            for p in net.parents(node):
                queue.append((p, _UP))
            for c in net.children(node):
                queue.append((c, _DOWN))
        elif direction == _DOWN:
            if node not in observed:
                for c in net.children(node):
                    queue.append((c, _DOWN))
            if node in anc_of_obs:
                for p in net.parents(node):
                    queue.append((p, _UP))
    return reached
