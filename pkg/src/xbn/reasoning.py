"""Explanation of reasoning: query classification and belief-change reports.

Classification is purely structural. Relative to a target variable, an
evidence variable can sit upstream (an ancestor, so the query predicts
effects from causes), downstream (a descendant, so the query diagnoses
causes from effects), or to the side as a competing cause whose shared
effect is observed (intercausal). Queries mixing these modes are labeled
``mixed`` rather than forced into one bucket.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .errors import QueryError
from .inference import posterior
from .model import Assignment, BayesianNetwork, validate_assignment

EXPLAINING_AWAY_MARGIN = 1e-12  # below this, a decrease is noise, not signal
_DIRECTION_TOLERANCE = 1e-9


class ReasoningKind(str, enum.Enum):
    PREDICTIVE = "predictive"
    DIAGNOSTIC = "diagnostic"
    INTERCAUSAL = "intercausal"
    MIXED = "mixed"


@dataclass(frozen=True)
class BeliefChangeReport:
    target: str
    state: str
    prior: float
    posterior: float
    direction: str  # increase | decrease | unchanged
    magnitude: float
    kind: ReasoningKind


def classify_query(
    net: BayesianNetwork, target: str, evidence: Assignment
) -> ReasoningKind:
    """Classify a (target, evidence) query by graph structure alone.

    predictive: every evidence variable is an ancestor of the target.
    diagnostic: every evidence variable is a descendant.
    intercausal: some evidence variable is neither, and it shares an
    observed common descendant with the target.
    Anything else, or several of the above at once, is mixed.
    """
    net.variable(target)
    ev = validate_assignment(net, evidence)
    if target in ev:
        raise QueryError(f"target '{target}' is observed")

    ancestors = net.ancestors(target)
    descendants = net.descendants(target)
    ev_vars = list(ev)

    all_ancestors = all(v in ancestors for v in ev_vars)
    all_descendants = all(v in descendants for v in ev_vars)
    intercausal = any(
        v not in ancestors
        and v not in descendants
        and any(
            d in net.descendants(v) and d in descendants for d in ev_vars
        )
        for v in ev_vars
    )

    holds = [all_ancestors, all_descendants, intercausal]
    if sum(holds) != 1:
        return ReasoningKind.MIXED
    if all_ancestors:
        return ReasoningKind.PREDICTIVE
    if all_descendants:
        return ReasoningKind.DIAGNOSTIC
    return ReasoningKind.INTERCAUSAL


def belief_change(
    net: BayesianNetwork, target: str, state: str, evidence: Assignment
) -> BeliefChangeReport:
    """Prior vs posterior of one target state under the evidence."""
    kind = classify_query(net, target, evidence)
    net.state_index(target, state)
    prior = posterior(net, (target,), {}).marginal(target)[state]
    post = posterior(net, (target,), evidence).marginal(target)[state]
    magnitude = post - prior
    if magnitude > _DIRECTION_TOLERANCE:
        direction = "increase"
    elif magnitude < -_DIRECTION_TOLERANCE:
        direction = "decrease"
    else:
        direction = "unchanged"
    return BeliefChangeReport(
        target=target,
        state=state,
        prior=prior,
        posterior=post,
        direction=direction,
        magnitude=magnitude,
        kind=kind,
    )


@dataclass(frozen=True)
class ExplainingAwayReport:
    cause: str
    cause_state: str
    competing_cause: str
    competing_state: str
    effect_evidence: dict[str, str]
    before: float
    after: float
    active: bool


def explaining_away(
    net: BayesianNetwork,
    cause1: tuple[str, str],
    cause2: tuple[str, str],
    effect_evidence: Assignment,
) -> ExplainingAwayReport:
    """Does confirming ``cause2`` lower the belief in ``cause1``?

    ``before`` conditions on the observed effect alone, ``after`` also on
    ``cause2``. Both causes must be unobserved ancestors of some observed
    effect variable; with no observed effect the question is ill-posed.
    """
    ev = validate_assignment(net, effect_evidence)
    if not ev:
        raise QueryError("explaining-away needs an observed effect")
    c1, s1 = cause1
    c2, s2 = cause2
    net.state_index(c1, s1)
    net.state_index(c2, s2)
    if c1 == c2:
        raise QueryError("the two causes must be distinct variables")
    for c in (c1, c2):
        if c in ev:
            raise QueryError(f"cause '{c}' is already observed")
        if not any(e in net.descendants(c) for e in ev):
            raise QueryError(
                f"'{c}' is not an ancestor of any observed effect variable"
            )
    if not any(e in net.descendants(c1) and e in net.descendants(c2) for e in ev):
        raise QueryError("the causes share no observed common effect")

    before = posterior(net, (c1,), ev).marginal(c1)[s1]
    after_ev = dict(ev)
    after_ev[c2] = s2
    after = posterior(net, (c1,), after_ev).marginal(c1)[s1]
    return ExplainingAwayReport(
        cause=c1,
        cause_state=s1,
        competing_cause=c2,
        competing_state=s2,
        effect_evidence=ev,
        before=before,
        after=after,
        active=after < before - EXPLAINING_AWAY_MARGIN,
    )
