"""Question taxonomy: route a structured question to an explanation method.

The taxonomy has three method families. Questions about a single outcome
(what will happen, what went wrong, how do competing causes interact)
belong to reasoning; questions about scenarios behind the evidence
(most probable, most relevant) belong to evidence; readiness and
information-value questions belong to decisions. ``route`` maps a
question to its method, ``explain`` executes it and renders a plain-text
narrative whose numbers are exactly the payload's, rounded to four
decimals (half to even).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from importlib import resources
from string import Template

from .decision import decide, make_decision_spec, sdp
from .errors import QueryError
from .evidence import map_query, mpe, mre
from .inference import posterior
from .jsonio import display_number
from .model import Assignment, BayesianNetwork, validate_assignment
from .reasoning import belief_change, explaining_away

SDP_CERTAIN_LABEL = "would not change the decision"
_SAME_DECISION_EPS = 1e-9


class QuestionKind(str, enum.Enum):
    WHAT_WILL_HAPPEN = "WhatWillHappen"
    WHAT_WENT_WRONG = "WhatWentWrong"
    MUTUAL_CAUSES = "MutualCauses"
    MOST_PROBABLE_SCENARIO = "MostProbableScenario"
    MOST_RELEVANT_EXPLANATION = "MostRelevantExplanation"
    READY_TO_DECIDE = "ReadyToDecide"
    WHAT_MORE_INFO = "WhatMoreInfo"


@dataclass(frozen=True)
class QuestionSpec:
    """A structured question; which slots are required depends on ``kind``.

    target/target_state drive the reasoning kinds; cause/competing the
    intercausal kind; target_set/k the evidence kinds; hypothesis,
    threshold and hidden the decision kinds.
    """

    kind: QuestionKind
    evidence: dict[str, str] = field(default_factory=dict)
    target: str | None = None
    target_state: str | None = None
    cause: tuple[str, str] | None = None
    competing: tuple[str, str] | None = None
    target_set: tuple[str, ...] | None = None
    k: int = 10
    hypothesis: tuple[str, str] | None = None
    threshold: float | None = None
    hidden: tuple[str, ...] | None = None


@dataclass(frozen=True)
class MethodPlan:
    category: str    # reasoning | evidence | decision
    operation: str
    arguments: dict


@dataclass(frozen=True)
class ExplanationReport:
    plan: MethodPlan
    payload: dict
    narrative: str
    provenance: dict


def route(net: BayesianNetwork, q: QuestionSpec) -> MethodPlan:
    """Resolve a question to a bound method plan. Raises on slot mismatch."""
    kind = QuestionKind(q.kind)
    ev = validate_assignment(net, q.evidence)

    if kind in (QuestionKind.WHAT_WILL_HAPPEN, QuestionKind.WHAT_WENT_WRONG):
        if not q.target:
            raise QueryError(f"{kind.value} needs a target variable")
        state = q.target_state or net.states(q.target)[0]
        net.state_index(q.target, state)
        if q.target in ev:
            raise QueryError(f"target '{q.target}' is observed")
        return MethodPlan(
            "reasoning",
            "posterior",
            {"target": q.target, "state": state, "evidence": ev},
        )

    if kind is QuestionKind.MUTUAL_CAUSES:
        if not q.cause or not q.competing:
            raise QueryError(
                "MutualCauses needs a cause and a competing cause"
            )
        return MethodPlan(
            "reasoning",
            "explaining_away",
            {"cause": list(q.cause), "competing": list(q.competing),
             "evidence": ev},
        )

    if kind is QuestionKind.MOST_PROBABLE_SCENARIO:
        if q.target_set:
            targets = _resolve_targets(net, q.target_set, ev)
            return MethodPlan(
                "evidence", "map", {"targets": list(targets), "evidence": ev}
            )
        return MethodPlan("evidence", "mpe", {"evidence": ev})

    if kind is QuestionKind.MOST_RELEVANT_EXPLANATION:
        targets = _resolve_targets(net, q.target_set, ev)
        return MethodPlan(
            "evidence",
            "mre",
            {"targets": list(targets), "evidence": ev, "k": q.k},
        )

    if kind is QuestionKind.READY_TO_DECIDE:
        spec = _decision_slots(net, q, ev, default_all_hidden=True)
        return MethodPlan(
            "decision",
            "sdp",
            {
                "hypothesis": list(spec.hypothesis),
                "threshold": spec.threshold,
                "evidence": spec.evidence,
                "hidden": list(spec.hidden),
            },
        )

    if kind is QuestionKind.WHAT_MORE_INFO:
        spec = _decision_slots(net, q, ev, default_all_hidden=False)
        candidates = [
            v.name
            for v in net.variables
            if v.name != spec.hypothesis[0] and v.name not in ev
        ]
        return MethodPlan(
            "decision",
            "sdp_sweep",
            {
                "hypothesis": list(spec.hypothesis),
                "threshold": spec.threshold,
                "evidence": spec.evidence,
                "candidates": candidates,
            },
        )

    raise QueryError(f"unsupported question kind {q.kind!r}")


def _resolve_targets(net, target_set, ev) -> tuple[str, ...]:
    if not target_set:
        targets = tuple(v.name for v in net.variables if v.name not in ev)
        if not targets:
            raise QueryError("every variable is observed")
        return targets
    for t in target_set:
        net.variable(t)
    return tuple(dict.fromkeys(target_set))


def _decision_slots(net, q, ev, default_all_hidden: bool):
    if not q.hypothesis:
        raise QueryError(f"{q.kind} needs a hypothesis Var=State")
    if q.threshold is None:
        raise QueryError(f"{q.kind} needs a decision threshold")
    hidden = q.hidden
    if hidden is None and default_all_hidden:
        hidden = tuple(
            v.name
            for v in net.variables
            if v.name != q.hypothesis[0] and v.name not in ev
        )
    return make_decision_spec(net, q.hypothesis, q.threshold, ev, hidden or ())


# -- execution ---------------------------------------------------------------


def explain(net: BayesianNetwork, q: QuestionSpec) -> ExplanationReport:
    """Execute the routed method and render the narrative report."""
    plan = route(net, q)
    handler = _HANDLERS[plan.operation]
    payload, narrative = handler(net, plan, QuestionKind(q.kind))
    return ExplanationReport(
        plan=plan,
        payload=payload,
        narrative=narrative,
        provenance={"network": net.name, "evidence": plan.arguments.get("evidence", {})},
    )


def _template(name: str) -> Template:
    text = (
        resources.files("xbn.assets.templates").joinpath(name + ".txt").read_text()
    )
    return Template(text)


def _render_evidence(ev: dict[str, str]) -> str:
    if not ev:
        return "(none)"
    return ", ".join(f"{k}={v}" for k, v in ev.items())


def _run_belief(net, plan, question):
    target = plan.arguments["target"]
    state = plan.arguments["state"]
    ev = plan.arguments["evidence"]
    report = belief_change(net, target, state, ev)
    marginal = (
        posterior(net, (target,), ev).marginal(target)
        if ev
        else posterior(net, (target,), {}).marginal(target)
    )
    payload = {
        "kind": report.kind.value,
        "target": target,
        "state": state,
        "prior": report.prior,
        "posterior": report.posterior,
        "direction": report.direction,
        "magnitude": report.magnitude,
        "posterior_marginal": marginal,
    }
    template = (
        "what_went_wrong"
        if question is QuestionKind.WHAT_WENT_WRONG
        else "what_will_happen"
    )
    narrative = _template(template).substitute(
        target=target,
        state=state,
        evidence=_render_evidence(ev),
        kind=report.kind.value,
        prior=display_number(report.prior),
        posterior=display_number(report.posterior),
        direction=report.direction,
        magnitude=display_number(report.magnitude),
    )
    return payload, narrative


def _run_explaining_away(net, plan, question):
    cause = tuple(plan.arguments["cause"])
    competing = tuple(plan.arguments["competing"])
    ev = plan.arguments["evidence"]
    report = explaining_away(net, cause, competing, ev)
    payload = {
        "cause": report.cause,
        "cause_state": report.cause_state,
        "competing_cause": report.competing_cause,
        "competing_state": report.competing_state,
        "before": report.before,
        "after": report.after,
        "active": report.active,
    }
    narrative = _template("mutual_causes").substitute(
        evidence=_render_evidence(ev),
        cause=report.cause,
        cause_state=report.cause_state,
        before=display_number(report.before),
        competing=report.competing_cause,
        competing_state=report.competing_state,
        after=display_number(report.after),
        active_phrase="active" if report.active else "not active",
    )
    return payload, narrative


def _run_mpe(net, plan, question):
    ev = plan.arguments["evidence"]
    result = mpe(net, ev)
    payload = {
        "assignment": result.assignment,
        "score": result.score,
        "score_kind": result.score_kind,
    }
    lines = "\n".join(
        f"  {var} = {state}" for var, state in result.assignment.items()
    )
    narrative = _template("most_probable_scenario").substitute(
        evidence=_render_evidence(ev),
        score_kind_phrase="joint probability",
        score=display_number(result.score),
        assignment_lines=lines,
    )
    return payload, narrative


def _run_map(net, plan, question):
    ev = plan.arguments["evidence"]
    result = map_query(net, plan.arguments["targets"], ev)
    payload = {
        "assignment": result.assignment,
        "score": result.score,
        "score_kind": result.score_kind,
    }
    lines = "\n".join(
        f"  {var} = {state}" for var, state in result.assignment.items()
    )
    narrative = _template("most_probable_scenario").substitute(
        evidence=_render_evidence(ev),
        score_kind_phrase="posterior probability",
        score=display_number(result.score),
        assignment_lines=lines,
    )
    return payload, narrative


def _run_mre(net, plan, question):
    ev = plan.arguments["evidence"]
    ranking = mre(net, plan.arguments["targets"], ev, k=plan.arguments["k"])
    entries = [
        {"assignment": e.assignment, "score": e.score} for e in ranking.entries
    ]
    payload = {
        "entries": entries,
        "target_set": list(ranking.target_set),
        "k": plan.arguments["k"],
    }
    lines = "\n".join(
        "  {rank}. {expl} (score {score})".format(
            rank=i + 1,
            expl=", ".join(f"{v}={s}" for v, s in e.assignment.items()),
            score=display_number(e.score),
        )
        for i, e in enumerate(ranking.entries)
    )
    top = ranking.entries[0]
    narrative = _template("most_relevant_explanation").substitute(
        evidence=_render_evidence(ev),
        entry_lines=lines,
        top_assignment=", ".join(f"{v}={s}" for v, s in top.assignment.items()),
        top_score=display_number(top.score),
    )
    return payload, narrative


def _sdp_payload(result) -> dict:
    return {
        "sdp": result.sdp,
        "baseline": {
            "posterior": result.baseline.posterior,
            "decision": result.baseline.decision,
            "threshold": result.baseline.threshold,
        },
        "hidden": list(result.hidden),
        "branches": [
            {
                "assignment": b.assignment,
                "weight": b.weight,
                "posterior": b.posterior,
                "same_decision": b.same_decision,
            }
            for b in result.branches
        ],
    }


def _run_sdp(net, plan, question):
    spec = make_decision_spec(
        net,
        tuple(plan.arguments["hypothesis"]),
        plan.arguments["threshold"],
        plan.arguments["evidence"],
        plan.arguments["hidden"],
    )
    result = sdp(net, spec)
    payload = _sdp_payload(result)
    narrative = _template("ready_to_decide").substitute(
        hypothesis=spec.hypothesis[0],
        hypothesis_state=spec.hypothesis[1],
        evidence=_render_evidence(spec.evidence),
        posterior=display_number(result.baseline.posterior),
        threshold=display_number(spec.threshold),
        decision=result.baseline.decision,
        hidden=", ".join(spec.hidden) if spec.hidden else "(none)",
        sdp=display_number(result.sdp),
    )
    return payload, narrative


def _run_sdp_sweep(net, plan, question):
    hypothesis = tuple(plan.arguments["hypothesis"])
    threshold = plan.arguments["threshold"]
    ev = plan.arguments["evidence"]
    baseline = decide(net, hypothesis, threshold, ev)
    candidates = []
    for var in plan.arguments["candidates"]:
        spec = make_decision_spec(net, hypothesis, threshold, ev, (var,))
        result = sdp(net, spec)
        posteriors = [
            b.posterior for b in result.branches if b.posterior is not None
        ]
        certain = result.sdp >= 1.0 - _SAME_DECISION_EPS
        candidates.append(
            {
                "variable": var,
                "sdp": result.sdp,
                "min_branch_posterior": min(posteriors),
                "max_branch_posterior": max(posteriors),
                "would_change_decision": not certain,
                "label": "" if not certain else SDP_CERTAIN_LABEL,
            }
        )
    candidates.sort(
        key=lambda c: (
            c["sdp"],
            -(c["max_branch_posterior"] - c["min_branch_posterior"]),
            net.index(c["variable"]),
        )
    )
    payload = {
        "baseline": {
            "posterior": baseline.posterior,
            "decision": baseline.decision,
            "threshold": baseline.threshold,
        },
        "candidates": candidates,
    }
    lines = []
    for c in candidates:
        tail = (
            f", {c['label']}"
            if c["label"]
            else (
                f" (branch posteriors span "
                f"{display_number(c['min_branch_posterior'])} to "
                f"{display_number(c['max_branch_posterior'])})"
            )
        )
        lines.append(
            f"  - {c['variable']}: same-decision probability "
            f"{display_number(c['sdp'])}{tail}"
        )
    narrative = _template("what_more_info").substitute(
        hypothesis=hypothesis[0],
        hypothesis_state=hypothesis[1],
        evidence=_render_evidence(ev),
        posterior=display_number(baseline.posterior),
        threshold=display_number(threshold),
        decision=baseline.decision,
        candidate_lines="\n".join(lines),
    )
    return payload, narrative


_HANDLERS = {
    "posterior": _run_belief,
    "explaining_away": _run_explaining_away,
    "mpe": _run_mpe,
    "map": _run_map,
    "mre": _run_mre,
    "sdp": _run_sdp,
    "sdp_sweep": _run_sdp_sweep,
}
