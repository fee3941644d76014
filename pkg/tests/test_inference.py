import random

import pytest

from xbn import (
    ImpossibleEvidenceError,
    QueryError,
    SearchSpaceError,
    d_separated,
    enumerate_distribution,
    evidence_probability,
    joint_probability,
    posterior,
)
from util import oracle_conditional, random_evidence, random_network

ALL_NO = {
    "VisitToAsia": "no",
    "Tuberculosis": "no",
    "Smoker": "no",
    "LungCancer": "no",
    "Bronchitis": "no",
    "TbOrCancer": "no",
    "XRay": "normal",
    "Dyspnoea": "no",
}


class TestJointProbability:
    def test_all_negative_instantiation(self, asia):
        expected = 0.99 * 0.99 * 0.5 * 0.99 * 0.7 * 1.0 * 0.95 * 0.9
        assert joint_probability(asia, ALL_NO) == pytest.approx(expected, abs=1e-12)

    def test_deterministic_or_zero(self, asia):
        inst = dict(ALL_NO)
        inst["TbOrCancer"] = "yes"  # impossible: both causes absent
        assert joint_probability(asia, inst) == 0.0

    def test_single_node(self):
        rng = random.Random(0)
        net = random_network(rng, n_vars=1)
        state = net.states("v0")[0]
        p = net.cpts["v0"].rows[0][0]
        assert joint_probability(net, {"v0": state}) == pytest.approx(p)

    def test_partial_instantiation_rejected(self, asia):
        with pytest.raises(QueryError):
            joint_probability(asia, {"Smoker": "yes"})


class TestEnumerateDistribution:
    def test_empty_evidence_totals_one(self, asia):
        assert enumerate_distribution(asia, {}).total() == pytest.approx(
            1.0, abs=1e-12
        )

    def test_evidence_total_matches_hand_sum(self, asia):
        total = enumerate_distribution(asia, {"TbOrCancer": "yes"}).total()
        assert total == pytest.approx(0.064828, abs=1e-12)

    def test_zero_support_evidence(self, asia):
        total = enumerate_distribution(
            asia, {"TbOrCancer": "no", "Tuberculosis": "yes"}
        ).total()
        assert total == 0.0

    def test_guard(self):
        rng = random.Random(1)
        net = random_network(rng, n_vars=26, edge_prob=0.1)
        with pytest.raises(SearchSpaceError):
            enumerate_distribution(net, {})


class TestEvidenceProbability:
    def test_empty_evidence(self, asia):
        assert evidence_probability(asia, {}) == pytest.approx(1.0, abs=1e-12)

    def test_or_node_marginal(self, asia):
        assert evidence_probability(asia, {"TbOrCancer": "yes"}) == pytest.approx(
            0.064828, abs=1e-10
        )

    def test_impossible_conjunction_is_zero(self, asia):
        p = evidence_probability(
            asia, {"TbOrCancer": "no", "Tuberculosis": "yes"}
        )
        assert p == 0.0

    def test_matches_enumeration(self, asia):
        for ev in (
            {"Dyspnoea": "yes"},
            {"XRay": "abnormal", "Smoker": "no"},
            {"Bronchitis": "yes", "VisitToAsia": "yes"},
        ):
            assert evidence_probability(asia, ev) == pytest.approx(
                enumerate_distribution(asia, ev).total(), abs=1e-10
            )


class TestPosterior:
    def test_smoker_given_or_node(self, asia):
        p = posterior(asia, ("Smoker",), {"TbOrCancer": "yes"})
        assert p.marginal("Smoker")["yes"] == pytest.approx(0.8435, abs=0.0005)

    def test_smoker_prior(self, asia):
        p = posterior(asia, ("Smoker",), {})
        assert p.marginal("Smoker")["yes"] == pytest.approx(0.5, abs=1e-12)

    def test_dsep_target_keeps_prior(self, asia):
        prior = posterior(asia, ("Tuberculosis",), {}).marginal("Tuberculosis")
        post = posterior(
            asia, ("Tuberculosis",), {"LungCancer": "yes"}
        ).marginal("Tuberculosis")
        for state in prior:
            assert post[state] == pytest.approx(prior[state], abs=1e-9)

    def test_impossible_evidence_raises(self, asia):
        with pytest.raises(ImpossibleEvidenceError):
            posterior(
                asia, ("Smoker",), {"TbOrCancer": "no", "Tuberculosis": "yes"}
            )

    def test_overlap_rejected(self, asia):
        with pytest.raises(QueryError):
            posterior(asia, ("Smoker",), {"Smoker": "yes"})

    def test_distribution_normalized(self, asia):
        p = posterior(asia, ("Bronchitis", "XRay"), {"Dyspnoea": "yes"})
        assert p.distribution.total() == pytest.approx(1.0, abs=1e-9)

    def test_multitarget_matches_oracle(self, asia):
        p = posterior(asia, ("Tuberculosis", "Bronchitis"), {"XRay": "abnormal"})
        p_ev = enumerate_distribution(asia, {"XRay": "abnormal"}).total()
        for t_state in ("yes", "no"):
            for b_state in ("yes", "no"):
                got = p.probability(
                    {"Tuberculosis": t_state, "Bronchitis": b_state}
                )
                want = (
                    enumerate_distribution(
                        asia,
                        {
                            "XRay": "abnormal",
                            "Tuberculosis": t_state,
                            "Bronchitis": b_state,
                        },
                    ).total()
                    / p_ev
                )
                assert got == pytest.approx(want, abs=1e-9)


class TestOracleEquivalence:
    """VE and brute-force enumeration agree on random networks."""

    def test_random_networks(self):
        rng = random.Random(20260808)
        for trial in range(40):
            net = random_network(rng, n_vars=rng.randint(2, 8), edge_prob=0.5)
            ev = random_evidence(rng, net)
            targets = [
                v.name for v in net.variables if v.name not in ev
            ]
            target = rng.choice(targets)
            want = oracle_conditional(net, target, ev)
            got = posterior(net, (target,), ev).marginal(target)
            for state in want:
                assert got[state] == pytest.approx(want[state], abs=1e-10)


class TestDSeparation:
    def test_marginally_independent_parents(self, asia):
        assert d_separated(asia, {"Tuberculosis"}, {"LungCancer"}, set())

    def test_collider_activation(self, asia):
        assert not d_separated(
            asia, {"Tuberculosis"}, {"LungCancer"}, {"TbOrCancer"}
        )

    def test_descendant_of_collider_activates(self, asia):
        assert not d_separated(asia, {"Tuberculosis"}, {"LungCancer"}, {"XRay"})

    def test_no_connecting_path(self, asia):
        assert d_separated(asia, {"VisitToAsia"}, {"Smoker"}, set())

    def test_chain_blocked_by_middle(self, asia):
        assert not d_separated(asia, {"Smoker"}, {"Dyspnoea"}, set())
        assert d_separated(
            asia, {"VisitToAsia"}, {"XRay"}, {"Tuberculosis"}
        )

    def test_overlapping_sets_rejected(self, asia):
        with pytest.raises(QueryError):
            d_separated(asia, {"Smoker"}, {"Smoker"}, set())
        with pytest.raises(QueryError):
            d_separated(asia, set(), {"Smoker"}, set())

    def test_soundness_on_random_networks(self):
        rng = random.Random(7)
        checked = 0
        for trial in range(30):
            net = random_network(rng, n_vars=rng.randint(3, 7), edge_prob=0.4)
            names = [v.name for v in net.variables]
            x, y = rng.sample(names, 2)
            others = [n for n in names if n not in (x, y)]
            z = rng.sample(others, rng.randint(0, min(2, len(others))))
            if not d_separated(net, {x}, {y}, set(z)):
                continue
            checked += 1
            for z_states in _combos(net, z):
                base = oracle_conditional(net, x, z_states)
                for y_state in net.states(y):
                    cond = oracle_conditional(
                        net, x, {**z_states, y: y_state}
                    )
                    for s in base:
                        assert cond[s] == pytest.approx(base[s], abs=1e-9)
        assert checked >= 3  # the sample must actually exercise separation


def _combos(net, variables):
    import itertools

    if not variables:
        return [{}]
    return [
        dict(zip(variables, states))
        for states in itertools.product(*(net.states(v) for v in variables))
    ]
