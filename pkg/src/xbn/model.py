"""Discrete Bayesian network representation and validation.

A network is a DAG of categorical variables, one conditional probability
table per variable. Instances are immutable once built; every query module
treats them as shared read-only data. ``build_network`` is the only
supported constructor and enforces all invariants (acyclicity, CPT shape,
row normalization).

Variable -> state assignments travel as plain mappings throughout the
package: a total mapping over all variables is an instantiation, a partial
one is evidence or a candidate explanation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import (
    CycleError,
    NetworkValidationError,
    QueryError,
    UnknownStateError,
    UnknownVariableError,
)

# Any variable->state mapping; validated against a network before use.
Assignment = Mapping[str, str]

ROW_SUM_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Variable:
    """A categorical variable with ordered state labels.

    ``alias`` is optional display metadata (short labels for reports); it
    never participates in inference.
    """

    name: str
    states: tuple[str, ...]
    alias: str | None = None

    def __post_init__(self):
        object.__setattr__(self, "states", tuple(self.states))


@dataclass(frozen=True)
class Cpt:
    """Conditional probability table for one variable.

    ``rows`` holds one distribution over the child's states per parent
    state combination, ordered with the last parent cycling fastest.
    """

    child: str
    parents: tuple[str, ...]
    rows: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "parents", tuple(self.parents))
        object.__setattr__(self, "rows", tuple(tuple(r) for r in self.rows))


class BayesianNetwork:
    """Validated, immutable network. Construct via :func:`build_network`."""

    def __init__(
        self,
        name: str,
        variables: tuple[Variable, ...],
        cpts: dict[str, Cpt],
        topological: tuple[str, ...],
    ):
        self.name = name
        self.variables = variables
        self.cpts = cpts
        self._topological = topological
        self._index = {v.name: i for i, v in enumerate(variables)}
        self._by_name = {v.name: v for v in variables}
        children: dict[str, list[str]] = {v.name: [] for v in variables}
        for cpt in cpts.values():
            for p in cpt.parents:
                children[p].append(cpt.child)
        self._children = {k: tuple(v) for k, v in children.items()}

    # -- lookups ---------------------------------------------------------

    @property
    def var_names(self) -> tuple[str, ...]:
        return tuple(v.name for v in self.variables)

    def variable(self, name: str) -> Variable:
        try:
            return self._by_name[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise UnknownVariableError(name) from None

    def states(self, name: str) -> tuple[str, ...]:
        return self.variable(name).states

    def card(self, name: str) -> int:
        return len(self.variable(name).states)

    def state_index(self, name: str, state: str) -> int:
        var = self.variable(name)
        try:
            return var.states.index(state)
        except ValueError:
            raise UnknownStateError(name, state, var.states) from None

    def parents(self, name: str) -> tuple[str, ...]:
        self.variable(name)
        return self.cpts[name].parents

    def children(self, name: str) -> tuple[str, ...]:
        self.variable(name)
        return self._children[name]

    def ancestors(self, name: str) -> frozenset[str]:
        """Proper ancestors (excludes ``name``)."""
        seen: set[str] = set()
        stack = list(self.parents(name))
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(self.parents(v))
        return frozenset(seen)

    def descendants(self, name: str) -> frozenset[str]:
        """Proper descendants (excludes ``name``)."""
        seen: set[str] = set()
        stack = list(self.children(name))
        while stack:
            v = stack.pop()
            if v not in seen:
                seen.add(v)
                stack.extend(self.children(v))
        return frozenset(seen)

    def row_index(self, name: str, parent_states: Mapping[str, str]) -> int:
        """Index into ``cpts[name].rows`` for the given parent assignment."""
        idx = 0
        for p in self.cpts[name].parents:
            idx = idx * self.card(p) + self.state_index(p, parent_states[p])
        return idx

    def arcs(self) -> list[tuple[str, str]]:
        """All (parent, child) pairs, in declaration order of the child."""
        out = []
        for v in self.variables:
            for p in self.cpts[v.name].parents:
                out.append((p, v.name))
        return out

    def __repr__(self):
        return f"BayesianNetwork({self.name!r}, {len(self.variables)} variables)"


def build_network(
    variables: Iterable[Variable],
    cpts: Iterable[Cpt],
    name: str = "network",
) -> BayesianNetwork:
    """Validate and assemble a network.

    Raises :class:`NetworkValidationError` (naming the offending variable)
    for duplicate or missing CPTs, bad row shapes, rows that do not sum to
    one within ``ROW_SUM_TOLERANCE``, or unknown parents, and
    :class:`CycleError` when the parent structure is cyclic. Rows within
    tolerance are renormalized so downstream arithmetic sees exact
    distributions.
    """
    variables = tuple(variables)
    if not variables:
        raise NetworkValidationError("network must contain at least one variable")

    seen_names: set[str] = set()
    for v in variables:
        if not v.name:
            raise NetworkValidationError("variable with empty name")
        if v.name in seen_names:
            raise NetworkValidationError(
                f"duplicate variable '{v.name}'", variable=v.name
            )
        seen_names.add(v.name)
        if len(v.states) < 2:
            raise NetworkValidationError(
                f"variable '{v.name}' needs at least 2 states", variable=v.name
            )
        if len(set(v.states)) != len(v.states):
            raise NetworkValidationError(
                f"variable '{v.name}' has duplicate state labels", variable=v.name
            )

    by_name = {v.name: v for v in variables}
    cpt_map: dict[str, Cpt] = {}
    for cpt in cpts:
        if cpt.child not in by_name:
            raise NetworkValidationError(
                f"CPT for undeclared variable '{cpt.child}'", variable=cpt.child
            )
        if cpt.child in cpt_map:
            raise NetworkValidationError(
                f"duplicate CPT for variable '{cpt.child}'", variable=cpt.child
            )
        cpt_map[cpt.child] = _normalized_cpt(cpt, by_name)
    for v in variables:
        if v.name not in cpt_map:
            raise NetworkValidationError(
                f"missing CPT for variable '{v.name}'", variable=v.name
            )

    topological = _topological_sort(variables, cpt_map)
    return BayesianNetwork(name, variables, cpt_map, topological)


def _normalized_cpt(cpt: Cpt, by_name: dict[str, Variable]) -> Cpt:
    child = by_name[cpt.child]
    if len(set(cpt.parents)) != len(cpt.parents):
        raise NetworkValidationError(
            f"CPT for '{cpt.child}' lists a parent twice", variable=cpt.child
        )
    expected_rows = 1
    for p in cpt.parents:
        if p not in by_name:
            raise NetworkValidationError(
                f"CPT for '{cpt.child}' references unknown parent '{p}'",
                variable=cpt.child,
            )
        expected_rows *= len(by_name[p].states)
    if len(cpt.rows) != expected_rows:
        raise NetworkValidationError(
            f"CPT for '{cpt.child}' has {len(cpt.rows)} rows, "
            f"expected {expected_rows}",
            variable=cpt.child,
        )
    rows = []
    for i, row in enumerate(cpt.rows):
        if len(row) != len(child.states):
            raise NetworkValidationError(
                f"CPT row {i} for '{cpt.child}' has {len(row)} entries, "
                f"expected {len(child.states)}",
                variable=cpt.child,
            )
        for p in row:
            if not (0.0 <= p <= 1.0) or not math.isfinite(p):
                raise NetworkValidationError(
                    f"CPT row {i} for '{cpt.child}' has entry {p!r} "
                    "outside [0, 1]",
                    variable=cpt.child,
                )
        total = math.fsum(row)
        if abs(total - 1.0) > ROW_SUM_TOLERANCE:
            raise NetworkValidationError(
                f"CPT row {i} for '{cpt.child}' sums to {total!r}, expected 1",
                variable=cpt.child,
            )
        rows.append(tuple(p / total for p in row))
    return Cpt(cpt.child, tuple(cpt.parents), tuple(rows))


def _topological_sort(
    variables: tuple[Variable, ...], cpts: dict[str, Cpt]
) -> tuple[str, ...]:
    """Kahn's algorithm; among ready nodes the earliest-declared wins."""
    order_index = {v.name: i for i, v in enumerate(variables)}
    indegree = {v.name: len(cpts[v.name].parents) for v in variables}
    children: dict[str, list[str]] = {v.name: [] for v in variables}
    for cpt in cpts.values():
        for p in cpt.parents:
            children[p].append(cpt.child)

    ready = sorted((name for name, d in indegree.items() if d == 0),
                   key=order_index.__getitem__)
    out: list[str] = []
    while ready:
        ready.sort(key=order_index.__getitem__)
        v = ready.pop(0)
        out.append(v)
        for c in children[v]:
            indegree[c] -= 1
            if indegree[c] == 0:
                ready.append(c)
    if len(out) != len(variables):
        stuck = min(
            (name for name, d in indegree.items() if d > 0),
            key=order_index.__getitem__,
        )
        raise CycleError(
            f"cycle detected involving variable '{stuck}'", variable=stuck
        )
    return tuple(out)


def topological_order(net: BayesianNetwork) -> tuple[str, ...]:
    """Parents-before-children order, ties broken by declaration order."""
    return net._topological


# -- assignment validation -----------------------------------------------


def validate_assignment(net: BayesianNetwork, assignment: Assignment) -> dict[str, str]:
    """Check names and states; return a dict ordered by declaration order."""
    for var, state in assignment.items():
        net.state_index(var, state)
    return {
        v.name: assignment[v.name] for v in net.variables if v.name in assignment
    }


def validate_instantiation(net: BayesianNetwork, inst: Assignment) -> dict[str, str]:
    """Like :func:`validate_assignment` but requires every variable assigned."""
    out = validate_assignment(net, inst)
    if len(out) != len(net.variables):
        missing = [v.name for v in net.variables if v.name not in out]
        raise QueryError(
            "instantiation must assign every variable; missing: "
            + ", ".join(missing)
        )
    return out


def networks_equivalent(
    a: BayesianNetwork, b: BayesianNetwork, tol: float = 1e-12
) -> bool:
    """Field-for-field equality with a tolerance on probabilities."""
    if a.name != b.name:
        return False
    if [(v.name, v.states, v.alias) for v in a.variables] != [
        (v.name, v.states, v.alias) for v in b.variables
    ]:
        return False
    for v in a.variables:
        ca, cb = a.cpts[v.name], b.cpts[v.name]
        if ca.parents != cb.parents:
            return False
        for ra, rb in zip(ca.rows, cb.rows):
            for pa, pb in zip(ra, rb):
                if abs(pa - pb) > tol:
                    return False
    return True
