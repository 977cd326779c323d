import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.spatial.transform import Rotation

from ea_atlas import qubit_unital as qu
from ea_atlas.channels import (
    Channel,
    compose,
    depolarizing,
    identity_channel,
    tensor,
    transpose_map,
)
from ea_atlas.criteria import BlockPositiveWitnessSearch, ea_status, eb_status, is_cp
from ea_atlas.qubit_unital import LambdaTriple, canonical_frame, classify, to_channel

R3 = 1 / np.sqrt(3)


def random_triples(n, seed, lo=-1.2, hi=1.2):
    rng = np.random.default_rng(seed)
    return [LambdaTriple(*row) for row in rng.uniform(lo, hi, size=(n, 3))]


def test_to_channel_examples():
    assert np.allclose(to_channel(LambdaTriple(1, 1, 1)).choi, identity_channel(2).choi, atol=1e-14)
    assert np.allclose(to_channel(LambdaTriple(0.3, 0.3, 0.3)).choi, depolarizing(2, 0.3).choi, atol=1e-14)
    assert np.allclose(to_channel(LambdaTriple(1, -1, 1)).choi, transpose_map(2).choi, atol=1e-14)


def test_classify_examples():
    c = classify(LambdaTriple(1, 1, 1))
    assert (c.positive, c.cp, c.eb, c.pair_positive, c.pair_pea, c.pair_ea) == (
        True, True, False, True, False, False)
    c = classify(LambdaTriple(R3, R3, R3))
    assert c.cp and c.pair_pea and c.pair_ea
    c = classify(LambdaTriple(0.9, 0.2, 0.0))
    assert not c.eb and c.pair_pea and not c.cp and not c.pair_ea
    assert set(c.to_dict()) == {"positive", "cp", "eb", "pair_positive", "pair_pea", "pair_ea"}


def test_pair_pea_boundary_matches_two_qubit_threshold():
    for q in np.linspace(0, 1, 101):
        assert classify(LambdaTriple(q, q, q)).pair_ea == (q * q <= 1 / 3 + 1e-12)


def test_nesting_on_random_triples():
    for t in random_triples(10_000, seed=1):
        c = classify(t)
        assert not c.eb or c.pair_pea
        assert not c.pair_pea or c.positive
        assert not c.cp or c.positive
        assert c.pair_ea == (c.cp and c.pair_pea)


def test_oracle_pair_positive_and_pair_pea():
    bad_cp = bad_eb = 0
    for t in random_triples(1000, seed=2):
        u = to_channel(t)
        uu = compose(u, u)
        bad_cp += qu.pair_positive(t) != is_cp(uu, tol=1e-9).yes
        bad_eb += qu.pair_pea(t) != eb_status(uu, tol=1e-9).yes
    assert bad_cp == 0 and bad_eb == 0


def test_oracle_cp_and_eb_single():
    for t in random_triples(500, seed=3):
        u = to_channel(t)
        assert qu.is_cp(t) == is_cp(u, tol=1e-9).yes
        assert qu.is_eb(t) == eb_status(u, tol=1e-9).yes


def test_pair_ea_never_refuted():
    cfg = BlockPositiveWitnessSearch(restarts=8, max_iters=60)
    picked = [t for t in random_triples(400, seed=4, lo=-1, hi=1) if classify(t).pair_ea][:25]
    assert len(picked) == 25
    for t in picked:
        u = to_channel(t)
        assert not ea_status(tensor(u, u), cfg).no


def test_pair_not_pea_is_refuted():
    u = to_channel(LambdaTriple(0.7, 0.6, 0.5))
    assert ea_status(tensor(u, u)).no


@given(st.tuples(*[st.floats(-1, 1)] * 3), st.integers(0, 2**31))
@settings(max_examples=50, deadline=None)
def test_canonical_frame_recovers_rotated_triple(lams, seed):
    r1 = Rotation.random(random_state=seed).as_matrix()
    r2 = Rotation.random(random_state=seed + 1).as_matrix()
    e = np.eye(4)
    e[1:, 1:] = r1 @ np.diag(lams) @ r2
    u, t, v = canonical_frame(Channel((2,), transfer=e))
    assert np.max(np.abs(u @ np.diag(list(t)) @ v - e[1:, 1:])) <= 1e-10
    assert np.linalg.det(u) > 0 and np.linalg.det(v) > 0
    assert np.allclose(sorted(np.abs(list(t))), sorted(np.abs(lams)), atol=1e-10)
    assert np.prod(list(t)) == pytest.approx(np.prod(lams), abs=1e-10)


def test_canonical_frame_rejects_non_unital():
    e = np.eye(4)
    e[3, 0] = 0.2
    with pytest.raises(ValueError):
        canonical_frame(Channel((2,), transfer=e))
    with pytest.raises(ValueError):
        canonical_frame(identity_channel(3))
