"""Shared test helpers: random networks and brute-force oracles.

The oracle helpers compute probabilities by summing chain-rule joints
over explicit completions, independently of both the variable-elimination
path and the numpy factor machinery.
"""

from __future__ import annotations

import itertools
import random

from xbn import BayesianNetwork, Cpt, Variable, build_network
from xbn.inference import joint_probability


def random_network(
    rng: random.Random,
    n_vars: int = 6,
    max_states: int = 2,
    edge_prob: float = 0.4,
    min_entry: float = 0.05,
    name: str = "random",
) -> BayesianNetwork:
    """Random DAG over declaration order with strictly positive CPTs."""
    variables = []
    for i in range(n_vars):
        n_states = rng.randint(2, max_states)
        states = tuple(f"s{j}" for j in range(n_states))
        variables.append(Variable(f"v{i}", states))
    cpts = []
    for i, v in enumerate(variables):
        parents = tuple(
            variables[j].name for j in range(i) if rng.random() < edge_prob
        )
        n_rows = 1
        for p in parents:
            n_rows *= len(variables[int(p[1:])].states)
        rows = []
        for _ in range(n_rows):
            raw = [min_entry + rng.random() for _ in v.states]
            total = sum(raw)
            rows.append(tuple(x / total for x in raw))
        cpts.append(Cpt(v.name, parents, tuple(rows)))
    return build_network(variables, cpts, name=name)


def random_evidence(
    rng: random.Random, net: BayesianNetwork, max_vars: int = 2
) -> dict[str, str]:
    n = rng.randint(0, min(max_vars, len(net.variables) - 1))
    chosen = rng.sample([v.name for v in net.variables], n)
    return {var: rng.choice(net.states(var)) for var in chosen}


def oracle_sum(net: BayesianNetwork, event: dict[str, str]) -> float:
    """P(event) by summing the chain-rule joint over all completions."""
    free = [v.name for v in net.variables if v.name not in event]
    total = 0.0
    inst = dict(event)
    for combo in itertools.product(*(net.states(v) for v in free)):
        inst.update(zip(free, combo))
        total += joint_probability(net, inst)
    return total


def oracle_conditional(
    net: BayesianNetwork, target: str, evidence: dict[str, str]
) -> dict[str, float]:
    """P(target | evidence) state by state, from oracle sums."""
    pe = oracle_sum(net, evidence)
    out = {}
    for state in net.states(target):
        out[state] = oracle_sum(net, {**evidence, target: state}) / pe
    return out


def oracle_gbf(
    net: BayesianNetwork, x: dict[str, str], evidence: dict[str, str]
) -> float | None:
    """GBF via oracle sums; None for degenerate explanations."""
    px = oracle_sum(net, x)
    if px <= 0.0 or px >= 1.0:
        return None
    pe = oracle_sum(net, evidence) if evidence else 1.0
    pex = oracle_sum(net, {**x, **evidence})
    rest = pe - pex
    if rest <= 0.0:
        return float("inf") if pex > 0 else 0.0
    return (pex / px) / (rest / (1.0 - px))


def oracle_mpe(
    net: BayesianNetwork, evidence: dict[str, str]
) -> tuple[dict[str, str], float]:
    """Argmax completion of the evidence by explicit enumeration."""
    free = [v.name for v in net.variables if v.name not in evidence]
    best, best_p = None, -1.0
    inst = dict(evidence)
    for combo in itertools.product(*(net.states(v) for v in free)):
        inst.update(zip(free, combo))
        p = joint_probability(net, inst)
        if p > best_p:
            best_p = p
            best = dict(zip(free, combo))
    return best, best_p


def oracle_sdp(
    net: BayesianNetwork,
    hypothesis: tuple[str, str],
    threshold: float,
    evidence: dict[str, str],
    hidden: list[str],
) -> float:
    """Same-decision probability by direct joint-enumeration summation."""
    hyp_var, hyp_state = hypothesis
    pe = oracle_sum(net, evidence)
    baseline = (oracle_sum(net, {**evidence, hyp_var: hyp_state}) / pe) >= threshold
    total = 0.0
    for combo in itertools.product(*(net.states(h) for h in hidden)):
        h = dict(zip(hidden, combo))
        peh = oracle_sum(net, {**evidence, **h})
        if peh <= 0.0:
            total += 0.0
            continue
        post = oracle_sum(net, {**evidence, **h, hyp_var: hyp_state}) / peh
        if ((post >= threshold) == baseline):
            total += peh / pe
    return total
