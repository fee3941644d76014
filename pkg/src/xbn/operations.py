"""Shared operation dispatch for the CLI and the HTTP service.

Both front ends funnel requests through :func:`run_operation`, which
returns one JSON-ready envelope::

    {"network": <label>, "operation": <name>,
     "parameters": <resolved echo>, "result": <payload>}

Because the envelope is built here and serialized by
:mod:`xbn.jsonio` in both places, a CLI invocation and a service query
with the same inputs produce byte-identical documents.
"""

from __future__ import annotations

from .decision import decide, make_decision_spec, sdp
from .errors import QueryError
from .evidence import gbf, map_query, mpe, mre
from .inference import enumerate_distribution, posterior
from .model import BayesianNetwork, validate_assignment
from .reasoning import classify_query
from .router import QuestionKind, QuestionSpec, explain

OPERATIONS = (
    "infer",
    "classify",
    "mpe",
    "map",
    "mre",
    "gbf",
    "sdp",
    "decide",
    "explain",
    "oracle",
)


def run_operation(
    net: BayesianNetwork, network_label: str, operation: str, params: dict
) -> dict:
    """Execute ``operation`` and wrap the result in the canonical envelope."""
    try:
        handler = _HANDLERS[operation]
    except KeyError:
        raise QueryError(
            f"unknown operation '{operation}' "
            f"(expected one of: {', '.join(OPERATIONS)})"
        ) from None
    resolved, result = handler(net, dict(params))
    return {
        "network": network_label,
        "operation": operation,
        "parameters": resolved,
        "result": result,
    }


def _evidence(net, params) -> dict[str, str]:
    ev = params.get("evidence") or {}
    if not isinstance(ev, dict):
        raise QueryError("evidence must be an object of Var: state")
    return validate_assignment(net, ev)


def _targets(net, params, ev, *, required=True) -> list[str]:
    raw = params.get("targets")
    if raw in (None, [], "ALL", "all"):
        targets = [v.name for v in net.variables if v.name not in ev]
        if not targets:
            raise QueryError("every variable is observed")
        if raw in (None, []) and required:
            raise QueryError("missing 'targets'")
        return targets
    if isinstance(raw, str):
        raw = [raw]
    if not isinstance(raw, list) or not all(isinstance(t, str) for t in raw):
        raise QueryError("targets must be a list of variable names or 'ALL'")
    return list(dict.fromkeys(raw))


def _pair(params, key) -> tuple[str, str]:
    raw = params.get(key)
    if (
        not isinstance(raw, (list, tuple))
        or len(raw) != 2
        or not all(isinstance(s, str) for s in raw)
    ):
        raise QueryError(f"'{key}' must be a [variable, state] pair")
    return raw[0], raw[1]


def _run_infer(net, params):
    ev = _evidence(net, params)
    targets = _targets(net, params, ev)
    post = posterior(net, targets, ev)
    cells = [
        {
            "assignment": dict(zip(post.targets, combo)),
            "probability": post.probability(dict(zip(post.targets, combo))),
        }
        for combo in _combos(post.state_labels)
    ]
    resolved = {"targets": list(post.targets), "evidence": ev}
    result = {
        "evidence_probability": post.evidence_probability,
        "posterior": post.marginals(),
        "cells": cells,
    }
    return resolved, result


def _combos(state_labels):
    import itertools

    return itertools.product(*state_labels)


def _run_classify(net, params):
    ev = _evidence(net, params)
    target = params.get("target")
    if not isinstance(target, str):
        raise QueryError("missing 'target'")
    kind = classify_query(net, target, ev)
    return (
        {"target": target, "evidence": ev},
        {"kind": kind.value},
    )


def _run_mpe(net, params):
    ev = _evidence(net, params)
    result = mpe(net, ev)
    return (
        {"evidence": ev},
        {
            "assignment": result.assignment,
            "score": result.score,
            "score_kind": result.score_kind,
        },
    )


def _run_map(net, params):
    ev = _evidence(net, params)
    targets = _targets(net, params, ev)
    result = map_query(net, targets, ev)
    return (
        {"targets": targets, "evidence": ev},
        {
            "assignment": result.assignment,
            "score": result.score,
            "score_kind": result.score_kind,
        },
    )


def _run_mre(net, params):
    ev = _evidence(net, params)
    targets = _targets(net, params, ev)
    k = params.get("k", 10)
    if not isinstance(k, int) or isinstance(k, bool):
        raise QueryError("'k' must be an integer")
    include_dominated = bool(params.get("include_dominated", False))
    ranking = mre(net, targets, ev, k=k, include_dominated=include_dominated)
    return (
        {
            "targets": list(ranking.target_set),
            "evidence": ev,
            "k": k,
            "include_dominated": include_dominated,
        },
        {
            "entries": [
                {"assignment": e.assignment, "score": e.score}
                for e in ranking.entries
            ]
        },
    )


def _run_gbf(net, params):
    ev = _evidence(net, params)
    x = params.get("explanation")
    if not isinstance(x, dict) or not x:
        raise QueryError("'explanation' must be a nonempty object of Var: state")
    xv = validate_assignment(net, x)
    score = gbf(net, xv, ev)
    return (
        {"explanation": xv, "evidence": ev},
        {"gbf": score},
    )


def _run_sdp(net, params):
    ev = _evidence(net, params)
    hypothesis = _pair(params, "hypothesis")
    threshold = params.get("threshold")
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise QueryError("'threshold' must be a number")
    hidden = params.get("hidden", [])
    if isinstance(hidden, str):
        hidden = [hidden]
    if not isinstance(hidden, list) or not all(isinstance(h, str) for h in hidden):
        raise QueryError("'hidden' must be a list of variable names")
    spec = make_decision_spec(net, hypothesis, float(threshold), ev, hidden)
    result = sdp(net, spec)
    resolved = {
        "hypothesis": list(spec.hypothesis),
        "threshold": spec.threshold,
        "evidence": spec.evidence,
        "hidden": list(spec.hidden),
    }
    return resolved, {
        "sdp": result.sdp,
        "baseline": {
            "posterior": result.baseline.posterior,
            "decision": result.baseline.decision,
            "threshold": result.baseline.threshold,
        },
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


def _run_decide(net, params):
    ev = _evidence(net, params)
    hypothesis = _pair(params, "hypothesis")
    threshold = params.get("threshold")
    if not isinstance(threshold, (int, float)) or isinstance(threshold, bool):
        raise QueryError("'threshold' must be a number")
    outcome = decide(net, hypothesis, float(threshold), ev)
    return (
        {
            "hypothesis": list(hypothesis),
            "threshold": float(threshold),
            "evidence": ev,
        },
        {
            "posterior": outcome.posterior,
            "decision": outcome.decision,
            "threshold": outcome.threshold,
        },
    )


def _run_explain(net, params):
    ev = _evidence(net, params)
    kind_raw = params.get("question")
    try:
        kind = QuestionKind(kind_raw)
    except ValueError:
        valid = ", ".join(k.value for k in QuestionKind)
        raise QueryError(
            f"unknown question kind {kind_raw!r} (expected one of: {valid})"
        ) from None

    spec = QuestionSpec(
        kind=kind,
        evidence=ev,
        target=params.get("target"),
        target_state=params.get("target_state"),
        cause=_opt_pair(params, "cause"),
        competing=_opt_pair(params, "competing"),
        target_set=tuple(params["targets"]) if params.get("targets") else None,
        k=params.get("k", 10),
        hypothesis=_opt_pair(params, "hypothesis"),
        threshold=params.get("threshold"),
        hidden=tuple(params["hidden"]) if params.get("hidden") is not None else None,
    )
    report = explain(net, spec)
    resolved = {"question": kind.value, "evidence": ev}
    result = {
        "plan": {
            "category": report.plan.category,
            "operation": report.plan.operation,
            "arguments": report.plan.arguments,
        },
        "payload": report.payload,
        "narrative": report.narrative,
        "provenance": report.provenance,
    }
    return resolved, result


def _opt_pair(params, key):
    if params.get(key) is None:
        return None
    return _pair(params, key)


def _run_oracle(net, params):
    ev = _evidence(net, params)
    factor = enumerate_distribution(net, ev)
    total = factor.total()
    marginals: dict[str, dict[str, float]] = {}
    for var in factor.scope:
        f = factor
        for other in factor.scope:
            if other != var:
                f = f.marginalize_out(other)
        marginals[var] = {
            state: (float(p) / total if total > 0 else 0.0)
            for state, p in zip(net.states(var), f.values)
        }
    return (
        {"evidence": ev},
        {"evidence_probability": total, "posterior": marginals},
    )


_HANDLERS = {
    "infer": _run_infer,
    "classify": _run_classify,
    "mpe": _run_mpe,
    "map": _run_map,
    "mre": _run_mre,
    "gbf": _run_gbf,
    "sdp": _run_sdp,
    "decide": _run_decide,
    "explain": _run_explain,
    "oracle": _run_oracle,
}
