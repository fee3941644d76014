"""Explanation of decisions: threshold decisions and same-decision probability.

A decision is positive when the posterior belief in the hypothesis state
reaches the threshold (equality counts as positive). The same-decision
probability asks how robust that call is to information we do not have:
enumerate every joint outcome of a chosen hidden set, recompute the
decision in each branch, and add up the posterior weight of the branches
that agree with the baseline.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleEvidenceError, QueryError, SearchSpaceError
from .inference import ve_joint
from .model import Assignment, BayesianNetwork, validate_assignment

SDP_ENUMERATION_GUARD = 10 ** 6


@dataclass(frozen=True)
class DecisionSpec:
    hypothesis: tuple[str, str]
    threshold: float
    evidence: dict[str, str]
    hidden: tuple[str, ...]


@dataclass(frozen=True)
class DecisionOutcome:
    posterior: float
    decision: str  # positive | negative
    threshold: float

    @property
    def positive(self) -> bool:
        return self.decision == "positive"


@dataclass(frozen=True)
class SdpBranch:
    assignment: dict[str, str]
    weight: float           # P(branch | evidence)
    posterior: float | None  # None when the branch has zero weight
    same_decision: bool


@dataclass(frozen=True)
class SdpResult:
    sdp: float
    baseline: DecisionOutcome
    branches: tuple[SdpBranch, ...]
    hidden: tuple[str, ...]


def make_decision_spec(
    net: BayesianNetwork,
    hypothesis: tuple[str, str],
    threshold: float,
    evidence: Assignment,
    hidden,
) -> DecisionSpec:
    """Validate and normalize the decision inputs."""
    hyp_var, hyp_state = hypothesis
    net.state_index(hyp_var, hyp_state)
    if not (0.0 <= threshold <= 1.0):
        raise QueryError("threshold must lie in [0, 1]")
    ev = validate_assignment(net, evidence)
    if hyp_var in ev:
        raise QueryError(f"hypothesis variable '{hyp_var}' is observed")
    hidden = tuple(dict.fromkeys(hidden))
    for h in hidden:
        net.variable(h)
        if h == hyp_var:
            raise QueryError("hidden set must not contain the hypothesis variable")
        if h in ev:
            raise QueryError(f"hidden variable '{h}' is observed")
    hidden = tuple(v.name for v in net.variables if v.name in set(hidden))
    return DecisionSpec((hyp_var, hyp_state), threshold, ev, hidden)


def decide(
    net: BayesianNetwork,
    hypothesis: tuple[str, str],
    threshold: float,
    evidence: Assignment,
) -> DecisionOutcome:
    """Threshold decision on the hypothesis state given the evidence."""
    spec = make_decision_spec(net, hypothesis, threshold, evidence, ())
    hyp_var, hyp_state = spec.hypothesis
    joint = ve_joint(net, (hyp_var,), spec.evidence)
    pe = joint.total()
    if pe <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")
    p = float(joint.values[net.state_index(hyp_var, hyp_state)]) / pe
    return _outcome(p, threshold)


def _outcome(posterior: float, threshold: float) -> DecisionOutcome:
    decision = "positive" if posterior >= threshold else "negative"
    return DecisionOutcome(posterior=posterior, decision=decision,
                           threshold=threshold)


def sdp(net: BayesianNetwork, spec: DecisionSpec) -> SdpResult:
    """Same-decision probability over the spec's hidden set.

    One variable elimination pass yields the joint of (hypothesis, hidden)
    given the evidence; each hidden branch is then a slice of that table.
    Zero-weight branches count as same-decision with weight zero, so they
    are visible in the table but never move the total.
    """
    hyp_var, hyp_state = spec.hypothesis
    branch_count = math.prod(net.card(h) for h in spec.hidden) if spec.hidden else 1
    if branch_count > SDP_ENUMERATION_GUARD:
        raise SearchSpaceError(
            f"sdp enumeration over {branch_count} branches exceeds the "
            f"guard ({SDP_ENUMERATION_GUARD})"
        )

    scope = tuple(
        v.name for v in net.variables if v.name == hyp_var or v.name in spec.hidden
    )
    joint = ve_joint(net, scope, spec.evidence)  # axes in declaration order
    pe = joint.total()
    if pe <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")

    hyp_axis = joint.scope.index(hyp_var)
    hyp_idx = net.state_index(hyp_var, hyp_state)
    weights = joint.values.sum(axis=hyp_axis)          # P(h, e)
    numer = np.take(joint.values, hyp_idx, axis=hyp_axis)  # P(hyp, h, e)
    baseline = _outcome(float(numer.sum()) / pe, spec.threshold)

    hidden_in_scope = tuple(v for v in joint.scope if v != hyp_var)
    branches = []
    total = 0.0
    for cell in itertools.product(*(range(net.card(v)) for v in hidden_in_scope)):
        w_joint = float(weights[cell]) if hidden_in_scope else float(weights)
        weight = w_joint / pe
        if w_joint <= 0.0:
            post, same = None, True
        else:
            num = float(numer[cell]) if hidden_in_scope else float(numer)
            post = num / w_joint
            same = _outcome(post, spec.threshold).positive == baseline.positive
        if same:
            total += weight
        branches.append(
            SdpBranch(
                assignment={
                    v: net.states(v)[i] for v, i in zip(hidden_in_scope, cell)
                },
                weight=weight,
                posterior=post,
                same_decision=same,
            )
        )
    # Weight accumulation can overshoot 1 by a few ulps when every branch
    # agrees; the quantity itself is a probability.
    total = min(max(total, 0.0), 1.0)
    return SdpResult(
        sdp=total, baseline=baseline, branches=tuple(branches), hidden=spec.hidden
    )
