"""Explanation of evidence: MPE, MAP, Bayes-factor scoring and MRE ranking.

MPE finds the single most probable complete scenario behind the evidence;
MAP restricts the scenario to a chosen target set. Both can overspecify:
they happily include variables that contribute nothing to the evidence.
The relevance route scores a partial instantiation x against evidence e by
the generalised Bayes factor

    GBF(x; e) = P(e | x) / P(e | not-x),

where not-x is the complement event of the whole conjunction, and ranks
candidates across all sizes.

A plain GBF sort is useless for presentation: every slight enlargement of
the best explanation (the explanation plus one near-certain extra state)
scores almost as high and floods the top of the list. The ranking
therefore drops dominated candidates, those not strictly better than every
nonempty sub-explanation of themselves, unless the caller asks for the raw
list. The top-scoring explanation is never dominated, so the returned
top-1 is always the global GBF maximizer.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    ImpossibleEvidenceError,
    ImpossibleExplanationError,
    QueryError,
    SearchSpaceError,
    VacuousExplanationError,
)
from .factors import Factor, cpt_factor, min_fill_order, multiply_all
from .inference import evidence_probability, ve_joint
from .model import Assignment, BayesianNetwork, validate_assignment

MRE_SEARCH_GUARD = 10 ** 7
MAP_TABLE_GUARD = 10 ** 7
# Relative slack when comparing a candidate against its sub-explanations;
# logically equivalent events must not survive on float noise alone.
_DOMINANCE_RTOL = 1e-9


@dataclass(frozen=True)
class Explanation:
    """A scored partial instantiation. ``score_kind`` is ``joint_posterior``
    for probability scores and ``gbf`` for Bayes-factor scores."""

    assignment: dict[str, str]
    score: float
    score_kind: str


@dataclass(frozen=True)
class ExplanationRanking:
    entries: tuple[Explanation, ...]
    evidence: dict[str, str]
    target_set: tuple[str, ...]


# -- most probable explanation ---------------------------------------------


def mpe(net: BayesianNetwork, evidence: Assignment) -> Explanation:
    """Highest-joint-probability assignment of all unobserved variables.

    The score is the joint probability of the completed instantiation
    (explanation plus evidence). Uses max-product variable elimination
    with traceback; ties fall to the earliest declared state.
    """
    ev = validate_assignment(net, evidence)
    free = [v.name for v in net.variables if v.name not in ev]
    if not free:
        raise QueryError("every variable is observed; nothing to explain")
    if evidence_probability(net, ev) <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")

    factors = [_restricted_cpt(net, v.name, ev) for v in net.variables]
    order = min_fill_order(net, [f.scope for f in factors], set(free))
    traceback: list[tuple[str, tuple[str, ...], np.ndarray]] = []
    for var in order:
        bucket = [f for f in factors if var in f.scope]
        rest = [f for f in factors if var not in f.scope]
        combined = multiply_all(bucket)
        reduced, argmax = combined.max_out(var)
        traceback.append((var, reduced.scope, argmax))
        factors = rest + [reduced]

    score = multiply_all(factors).values.item()
    assignment_idx: dict[str, int] = {}
    for var, scope, argmax in reversed(traceback):
        idx = tuple(assignment_idx[u] for u in scope)
        assignment_idx[var] = int(argmax[idx])
    assignment = {
        v.name: net.states(v.name)[assignment_idx[v.name]]
        for v in net.variables
        if v.name in assignment_idx
    }
    return Explanation(assignment=assignment, score=float(score),
                       score_kind="joint_posterior")


def _restricted_cpt(net: BayesianNetwork, var: str, ev: dict[str, str]):
    f = cpt_factor(net, var)
    for v in f.scope:
        if v in ev:
            f = f.restrict(v, net.state_index(v, ev[v]))
    return f


def map_query(net: BayesianNetwork, targets, evidence: Assignment) -> Explanation:
    """Most probable joint assignment of ``targets`` given the evidence.

    Marginalizes the remaining unobserved variables, then maximizes; the
    score is the posterior probability P(targets = assignment | evidence).
    """
    targets = tuple(dict.fromkeys(targets))
    if not targets:
        raise QueryError("map query needs a nonempty target set")
    ev = validate_assignment(net, evidence)
    for t in targets:
        net.variable(t)
        if t in ev:
            raise QueryError(f"target '{t}' is observed")

    free = {v.name for v in net.variables if v.name not in ev}
    if set(targets) == free:
        best = mpe(net, ev)
        pe = evidence_probability(net, ev)
        return Explanation(best.assignment, best.score / pe, "joint_posterior")

    table_size = math.prod(net.card(t) for t in targets)
    if table_size > MAP_TABLE_GUARD:
        raise SearchSpaceError(
            f"map table over {table_size} cells exceeds the guard "
            f"({MAP_TABLE_GUARD})"
        )
    joint = ve_joint(net, targets, ev)
    pe = joint.total()
    if pe <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")
    flat = int(joint.values.argmax())
    idx = np.unravel_index(flat, joint.values.shape)
    assignment = {
        var: net.states(var)[i] for var, i in zip(joint.scope, idx)
    }
    return Explanation(
        assignment=assignment,
        score=float(joint.values[idx] / pe),
        score_kind="joint_posterior",
    )


# -- generalised Bayes factor ----------------------------------------------


def gbf(net: BayesianNetwork, x: Assignment, evidence: Assignment) -> float:
    """GBF(x; e) = P(e|x) / P(e|not-x); ``math.inf`` when not-x rules e out.

    Raises for degenerate explanations: P(x) = 0 (impossible) and
    P(x) = 1 (vacuous, the complement cannot occur).
    """
    xv = validate_assignment(net, x)
    if not xv:
        raise QueryError("explanation must assign at least one variable")
    ev = validate_assignment(net, evidence)
    overlap = set(xv) & set(ev)
    if overlap:
        raise QueryError(
            "explanation overlaps evidence: " + ", ".join(sorted(overlap))
        )
    px = evidence_probability(net, xv)
    pe = evidence_probability(net, ev) if ev else 1.0
    if pe <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")
    pex = evidence_probability(net, {**xv, **ev})
    return _gbf_from_probs(px, pe, pex)


def _gbf_from_probs(px: float, pe: float, pex: float) -> float:
    if px <= 0.0:
        raise ImpossibleExplanationError("impossible explanation: P(x) = 0")
    if px >= 1.0:
        raise VacuousExplanationError("vacuous explanation: P(x) = 1")
    p_e_given_x = pex / px
    p_e_and_notx = max(pe - pex, 0.0)
    if p_e_and_notx == 0.0:
        return math.inf if pex > 0.0 else 0.0
    p_e_given_notx = p_e_and_notx / (1.0 - px)
    return p_e_given_x / p_e_given_notx


# -- most relevant explanation ----------------------------------------------


def mre(
    net: BayesianNetwork,
    target_set,
    evidence: Assignment,
    k: int = 10,
    include_dominated: bool = False,
) -> ExplanationRanking:
    """Top-k partial instantiations of ``target_set`` ranked by GBF.

    Enumerates every nonempty partial instantiation (all subsets of the
    target set, all state combinations), exhaustively. Candidates whose
    prior is 0 or 1 are not explanations and are skipped. Unless
    ``include_dominated`` is set, a candidate is kept only when its GBF
    strictly exceeds that of every nonempty proper sub-explanation.
    Ordering: score descending, then fewer variables, then declaration
    order of variables and states.
    """
    targets = tuple(dict.fromkeys(target_set))
    if not targets:
        raise QueryError("mre needs a nonempty target set")
    if k < 1:
        raise QueryError("k must be at least 1")
    ev = validate_assignment(net, evidence)
    for t in targets:
        net.variable(t)
        if t in ev:
            raise QueryError(f"target '{t}' is observed")

    space = 1
    for t in targets:
        space *= net.card(t) + 1
    space -= 1
    if space > MRE_SEARCH_GUARD:
        raise SearchSpaceError(
            f"search space of {space} partial instantiations exceeds the "
            f"guard ({MRE_SEARCH_GUARD})"
        )

    targets = tuple(v.name for v in net.variables if v.name in set(targets))
    joint_e = ve_joint(net, targets, ev)  # axes follow `targets`
    prior = ve_joint(net, targets, {})
    pe = joint_e.total()
    if pe <= 0.0:
        raise ImpossibleEvidenceError("impossible evidence: P(evidence) = 0")

    candidates: list[tuple[float, tuple[tuple[str, str], ...], tuple[tuple[int, int], ...]]] = []
    n = len(targets)
    for r in range(1, n + 1):
        for subset in itertools.combinations(range(n), r):
            sub_vars = tuple(targets[i] for i in subset)
            pex_table = _marginal_onto(joint_e, sub_vars)
            px_table = _marginal_onto(prior, sub_vars)
            for cell in itertools.product(
                *(range(net.card(v)) for v in sub_vars)
            ):
                px = float(px_table.values[cell])
                pex = float(pex_table.values[cell])
                if px <= 0.0 or px >= 1.0:
                    continue
                score = _gbf_from_probs(px, pe, pex)
                key = tuple(zip(subset, cell))
                assignment = tuple(
                    (v, net.states(v)[s]) for v, s in zip(sub_vars, cell)
                )
                candidates.append((score, assignment, key))

    by_key = {frozenset(key): score for score, _, key in candidates}
    entries = []
    for score, assignment, key in candidates:
        if not include_dominated and _dominated(score, key, by_key):
            continue
        entries.append((score, assignment, key))

    entries.sort(key=lambda t: (-t[0], len(t[2]), t[2]))
    top = tuple(
        Explanation(assignment=dict(assignment), score=score, score_kind="gbf")
        for score, assignment, _ in entries[:k]
    )
    return ExplanationRanking(entries=top, evidence=ev, target_set=targets)


def _marginal_onto(f: Factor, keep: tuple[str, ...]) -> Factor:
    out = f
    for v in f.scope:
        if v not in keep:
            out = out.marginalize_out(v)
    return out.transpose_to(keep)


def _dominated(
    score: float,
    key: tuple[tuple[int, int], ...],
    by_key: dict[frozenset, float],
) -> bool:
    """A candidate loses to any sub-explanation scoring at least as high."""
    if len(key) == 1:
        return False
    for r in range(1, len(key)):
        for sub in itertools.combinations(key, r):
            other = by_key.get(frozenset(sub))
            if other is None:
                continue
            if other == math.inf and score == math.inf:
                return True
            if other >= score * (1.0 - _DOMINANCE_RTOL):
                return True
    return False
