"""Exact inference: joint, evidence and posterior probabilities.

Two independent computation routes are deliberately kept side by side:

* variable elimination over numpy factors (the fast path used by every
  query module), and
* :func:`enumerate_distribution`, a brute-force chain-rule enumeration in
  plain Python that serves as a cross-checking oracle and is shipped as a
  public operation.

Both are exact; agreement between them is asserted by the test suite and
available to users through the CLI ``oracle`` subcommand.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleEvidenceError, QueryError, SearchSpaceError
from .factors import Factor, cpt_factor, min_fill_order, multiply_all
from .model import (
    Assignment,
    BayesianNetwork,
    validate_assignment,
    validate_instantiation,
)

ENUMERATION_GUARD = 2 ** 25  # joint states of the unobserved variables


@dataclass(frozen=True)
class Posterior:
    """Normalized conditional distribution over ``targets`` given ``evidence``."""

    targets: tuple[str, ...]
    state_labels: tuple[tuple[str, ...], ...]
    distribution: Factor
    evidence: dict[str, str]
    evidence_probability: float

    def probability(self, assignment: Assignment) -> float:
        """P(targets = assignment | evidence) for a total target assignment."""
        idx = tuple(
            self.state_labels[i].index(assignment[var])
            for i, var in enumerate(self.targets)
        )
        return float(self.distribution.values[idx])

    def marginal(self, var: str) -> dict[str, float]:
        """Marginal distribution of one target variable, by state label."""
        f = self.distribution
        for other in self.targets:
            if other != var:
                f = f.marginalize_out(other)
        labels = self.state_labels[self.targets.index(var)]
        return dict(zip(labels, (float(p) for p in f.values)))

    def marginals(self) -> dict[str, dict[str, float]]:
        return {var: self.marginal(var) for var in self.targets}


# -- chain rule and the enumeration oracle --------------------------------


def joint_probability(net: BayesianNetwork, inst: Assignment) -> float:
    """P(inst) as the chain-rule product of CPT entries.

    ``inst`` must assign every variable of the network.
    """
    full = validate_instantiation(net, inst)
    p = 1.0
    for v in net.variables:
        cpt = net.cpts[v.name]
        row = cpt.rows[net.row_index(v.name, full)]
        p *= row[net.state_index(v.name, full[v.name])]
    return p


def enumerate_distribution(net: BayesianNetwork, evidence: Assignment) -> Factor:
    """Unnormalized joint over all unobserved variables, by brute force.

    Sums :func:`joint_probability` over every completion of the evidence;
    the factor total equals P(evidence). Kept independent of the variable
    elimination path on purpose. Guarded to networks whose unobserved
    joint state space does not exceed ``ENUMERATION_GUARD``.
    """
    ev = validate_assignment(net, evidence)
    free = [v.name for v in net.variables if v.name not in ev]
    size = math.prod(net.card(v) for v in free)
    if size > ENUMERATION_GUARD:
        raise SearchSpaceError(
            f"enumeration over {size} joint states exceeds the guard "
            f"({ENUMERATION_GUARD})"
        )
    state_lists = [net.states(v) for v in free]
    values = []
    inst = dict(ev)
    for combo in itertools.product(*state_lists):
        inst.update(zip(free, combo))
        values.append(joint_probability(net, inst))
    shape = tuple(net.card(v) for v in free)
    return Factor(tuple(free), np.array(values).reshape(shape))


# -- variable elimination --------------------------------------------------


def ve_joint(
    net: BayesianNetwork, keep: tuple[str, ...], evidence: Assignment
) -> Factor:
    """Unnormalized P(keep, evidence) via variable elimination.

    Returns a factor over ``keep`` with axes in network declaration order;
    the factor total equals P(evidence). Evidence variables never appear
    in the scope. Elimination follows a min-fill order with
    declaration-order tie-breaks, so results are reproducible run to run.
    """
    ev = validate_assignment(net, evidence)
    keep = tuple(keep)
    factors = []
    for v in net.variables:
        f = cpt_factor(net, v.name)
        for var in f.scope:
            if var in ev:
                f = f.restrict(var, net.state_index(var, ev[var]))
        factors.append(f)

    eliminate = {
        v.name for v in net.variables if v.name not in ev and v.name not in keep
    }
    order = min_fill_order(net, [f.scope for f in factors], eliminate)
    for var in order:
        bucket = [f for f in factors if var in f.scope]
        rest = [f for f in factors if var not in f.scope]
        combined = multiply_all(bucket)
        factors = rest + [combined.marginalize_out(var)]

    result = multiply_all(factors)
    declared = tuple(v.name for v in net.variables if v.name in keep)
    return result.transpose_to(declared)


def evidence_probability(net: BayesianNetwork, evidence: Assignment) -> float:
    """P(evidence) by variable elimination; 0.0 is a legal return."""
    return ve_joint(net, (), evidence).total()


def posterior(net: BayesianNetwork, targets, evidence: Assignment) -> Posterior:
    """P(targets | evidence), normalized.

    Raises :class:`QueryError` when targets are empty, duplicated or
    overlap the evidence, and :class:`ImpossibleEvidenceError` when
    P(evidence) = 0.
    """
    targets = tuple(targets)
    if not targets:
        raise QueryError("posterior needs at least one target variable")
    for t in targets:
        net.variable(t)
    if len(set(targets)) != len(targets):
        raise QueryError("duplicate target variable")
    ev = validate_assignment(net, evidence)
    overlap = set(targets) & set(ev)
    if overlap:
        raise QueryError(
            "target variables overlap evidence: " + ", ".join(sorted(overlap))
        )

    joint = ve_joint(net, targets, ev)
    pe = joint.total()
    if pe <= 0.0:
        raise ImpossibleEvidenceError(
            "impossible evidence: P(evidence) = 0 for "
            + ", ".join(f"{k}={v}" for k, v in ev.items())
        )
    return Posterior(
        targets=joint.scope,
        state_labels=tuple(net.states(v) for v in joint.scope),
        distribution=Factor(joint.scope, joint.values / pe),
        evidence=ev,
        evidence_probability=pe,
    )
