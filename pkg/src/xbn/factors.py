"""Factors: nonnegative tables over subsets of network variables.

The factor is the working currency of variable elimination. Values live in
a numpy array with one axis per scope variable, so product and
marginalization reduce to broadcasting and axis sums.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .model import BayesianNetwork


@dataclass(frozen=True)
class Factor:
    """Table over ``scope``; ``values.shape`` matches the state counts."""

    scope: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "scope", tuple(self.scope))
        vals = np.asarray(self.values, dtype=float)
        object.__setattr__(self, "values", vals)
        if vals.ndim != len(self.scope):
            raise ValueError("factor shape does not match scope")

    @property
    def cards(self) -> tuple[int, ...]:
        return self.values.shape

    def total(self) -> float:
        return float(self.values.sum())

    def normalized(self) -> "Factor":
        return Factor(self.scope, self.values / self.values.sum())

    def marginalize_out(self, var: str) -> "Factor":
        ax = self.scope.index(var)
        return Factor(
            self.scope[:ax] + self.scope[ax + 1:], self.values.sum(axis=ax)
        )

    def max_out(self, var: str) -> tuple["Factor", np.ndarray]:
        """Max-marginalize ``var``; also return the argmax table.

        The argmax array is indexed by the remaining scope and holds the
        state index of ``var`` achieving the maximum (lowest index wins on
        ties, which keeps results deterministic).
        """
        ax = self.scope.index(var)
        reduced = Factor(
            self.scope[:ax] + self.scope[ax + 1:], self.values.max(axis=ax)
        )
        return reduced, self.values.argmax(axis=ax)

    def restrict(self, var: str, state_index: int) -> "Factor":
        ax = self.scope.index(var)
        return Factor(
            self.scope[:ax] + self.scope[ax + 1:],
            np.take(self.values, state_index, axis=ax),
        )

    def transpose_to(self, scope: tuple[str, ...]) -> "Factor":
        if tuple(scope) == self.scope:
            return self
        perm = [self.scope.index(v) for v in scope]
        return Factor(tuple(scope), np.transpose(self.values, perm))


def unit_factor() -> Factor:
    return Factor((), np.array(1.0))


def multiply(a: Factor, b: Factor) -> Factor:
    scope = a.scope + tuple(v for v in b.scope if v not in a.scope)
    return Factor(scope, _aligned(a, scope) * _aligned(b, scope))


def multiply_all(factors: list[Factor]) -> Factor:
    if not factors:
        return unit_factor()
    out = factors[0]
    for f in factors[1:]:
        out = multiply(out, f)
    return out


def _aligned(f: Factor, scope: tuple[str, ...]) -> np.ndarray:
    """View of ``f.values`` broadcastable over ``scope``."""
    if f.scope == scope:
        return f.values
    positions = [scope.index(v) for v in f.scope]
    order = sorted(range(len(f.scope)), key=positions.__getitem__)
    vals = np.transpose(f.values, order)
    shape = [1] * len(scope)
    for axis_old in order:
        shape[positions[axis_old]] = f.values.shape[axis_old]
    return vals.reshape(shape)


def cpt_factor(net: BayesianNetwork, var: str) -> Factor:
    """The CPT of ``var`` as a factor over (parents..., var)."""
    cpt = net.cpts[var]
    parent_cards = [net.card(p) for p in cpt.parents]
    vals = np.array(cpt.rows, dtype=float).reshape(parent_cards + [net.card(var)])
    return Factor(tuple(cpt.parents) + (var,), vals)


def min_fill_order(
    net: BayesianNetwork, scopes: list[tuple[str, ...]], eliminate: set[str]
) -> list[str]:
    """Greedy min-fill elimination order, ties broken by declaration order.

    ``scopes`` are the current factor scopes; the interaction graph joins
    every pair of variables sharing a scope.
    """
    neighbors: dict[str, set[str]] = {v: set() for v in eliminate}
    cliques = [set(s) for s in scopes]
    for clique in cliques:
        for v in clique:
            if v in neighbors:
                neighbors[v] |= clique - {v}

    order: list[str] = []
    remaining = set(eliminate)
    while remaining:
        best = None
        best_key = None
        for v in sorted(remaining, key=net.index):
            nbrs = [u for u in neighbors[v] if u in remaining or u not in eliminate]
            fill = 0
            for i, u in enumerate(nbrs):
                for w in nbrs[i + 1:]:
                    joined = any(u in c and w in c for c in cliques)
                    if not joined:
                        fill += 1
            key = (fill, net.index(v))
            if best_key is None or key < best_key:
                best, best_key = v, key
        order.append(best)
        remaining.discard(best)
        merged = set()
        kept = []
        for c in cliques:
            if best in c:
                merged |= c - {best}
            else:
                kept.append(c)
        kept.append(merged)
        cliques = kept
        for v in merged:
            if v in neighbors:
                neighbors[v] |= merged - {v}
    return order
