import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from climgov.config import InfluenceConfig
from climgov.engo import EngoState
from climgov.errors import ContractError, UnknownIdError
from climgov.influence import (
    diffuse_awareness,
    peer_share,
    peer_shares,
    update_motive_weight,
    update_motive_weights,
)
from climgov.population import PopulationConfig, SocialNetwork, generate_population

DEFAULT = InfluenceConfig()


def star(n_leaves):
    return SocialNetwork(n_leaves + 1, [(0, j) for j in range(1, n_leaves + 1)])


def test_isolated_node_has_zero_share():
    net = SocialNetwork(3, [(0, 1)])
    assert peer_share(net, {"join_engo": np.ones(3, bool)}, 2, "join_engo") == 0.0


def test_half_of_four_neighbours():
    active = np.array([False, True, True, False, False])
    assert peer_share(star(4), {"join_engo": active}, 0, "join_engo") == 0.5


def test_unknown_id():
    with pytest.raises(UnknownIdError):
        peer_share(star(2), {"join_engo": np.zeros(3, bool)}, 7, "join_engo")


def test_peer_share_matches_recount_oracle(rng):
    for trial in range(30):
        n = int(rng.integers(2, 40))
        pairs = {tuple(sorted(map(int, rng.choice(n, 2, replace=False)))) for _ in range(int(rng.integers(0, 3 * n)))}
        net = SocialNetwork(n, sorted(pairs))
        active = rng.random(n) < rng.random()
        vector = peer_shares(net, active)
        for i in range(n):
            expected = oracles.recount_share(net.edges, active, i)
            assert peer_share(net, {"k": active}, i, "k") == expected
            assert vector[i] == expected


def test_update_examples():
    assert update_motive_weight(1.0, DEFAULT) == 1.0
    assert update_motive_weight(0.5, DEFAULT) == 0.75
    assert update_motive_weight(0.0, DEFAULT) == pytest.approx(0.0066928509242848554, abs=1e-15)
    for k in (0.5, 3.0, 40.0):
        assert update_motive_weight(0.3, InfluenceConfig(k=k, tau=0.3)) == pytest.approx(0.3 + 0.7 / 2, abs=1e-15)


def test_update_rejects_out_of_range():
    with pytest.raises(ContractError):
        update_motive_weight(1.01, DEFAULT)


@given(st.floats(0, 1), st.floats(0.1, 50), st.floats(0, 1))
def test_update_closure_and_oracle(w, k, tau):
    out = update_motive_weight(w, InfluenceConfig(k=k, tau=tau))
    assert w <= out <= 1.0
    assert abs(out - oracles.logistic_update(w, k, tau)) <= 1e-12


def test_increment_vanishes_at_saturation():
    w = 1.0 - np.logspace(-1, -12, 12)
    inc = update_motive_weights(w, 10.0, 0.5) - w
    assert np.all(np.diff(inc) < 0)
    assert inc[-1] < 1e-11


def test_increment_peaks_in_interior():
    grid = np.linspace(0, 1, 1001)
    inc = update_motive_weights(grid, 10.0, 0.5) - grid
    peak = int(np.argmax(inc))
    assert 0 < peak < len(grid) - 1


def test_array_form_matches_scalar(rng):
    w = rng.random(200)
    vec = update_motive_weights(w, 10.0, 0.5)
    assert all(vec[i] == update_motive_weight(float(w[i]), DEFAULT) for i in range(200))


def _pop(n=6):
    return generate_population(PopulationConfig(size=n), np.random.default_rng(0))


def test_member_becomes_aware_without_exposure():
    pop = _pop()
    pop.member[2] = True
    engo = EngoState(exists=True, members={2})
    diffuse_awareness(pop, engo, "action", np.zeros(6, bool))
    assert pop.aware_action[2]
    assert pop.aware_action.sum() == 1


def test_non_member_needs_exposure():
    pop = _pop()
    exposed = np.zeros(6, bool)
    exposed[4] = True
    diffuse_awareness(pop, EngoState(exists=True), "disruptive", exposed)
    assert pop.aware_disruptive.tolist() == exposed.tolist()
    assert not pop.aware_action.any()


def test_awareness_is_never_revoked():
    pop = _pop()
    first = np.array([1, 0, 1, 0, 0, 0], bool)
    diffuse_awareness(pop, None, "action", first)
    diffuse_awareness(pop, None, "action", np.zeros(6, bool))
    assert pop.aware_action.tolist() == first.tolist()


def test_unknown_event():
    with pytest.raises(ContractError):
        diffuse_awareness(_pop(), None, "petition", np.zeros(6, bool))
