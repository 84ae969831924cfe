import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from polypgate.edges import DirectionalEdgeMaps, EdgeConfig, compute_edges, edge_census
from polypgate.errors import ConfigError

from oracles import naive_edges

images = arrays(np.uint8, st.tuples(st.integers(1, 9), st.integers(1, 9)), elements=st.integers(0, 255))


def test_constant_image_has_no_edges():
    maps = compute_edges(np.full((6, 6), 77, np.uint8))
    assert not maps.any().any()


def test_dark_to_bright_step():
    maps = compute_edges(np.array([[50, 200]], np.uint8))
    assert maps.dark_left.tolist() == [[False, True]]
    assert maps.dark_right.tolist() == [[False, False]]


def test_bright_to_brighter_is_rejected():
    maps = compute_edges(np.array([[150, 200]], np.uint8))
    assert not maps.any().any()


def test_step_must_exceed_tau1():
    # 53 > 50 + 2 holds, 52 > 50 + 2 does not
    assert compute_edges(np.array([[50, 53]], np.uint8)).dark_left[0, 1]
    assert not compute_edges(np.array([[50, 52]], np.uint8)).dark_left[0, 1]


def test_dark_side_must_be_below_tau2():
    assert compute_edges(np.array([[99, 200]], np.uint8)).dark_left[0, 1]
    assert not compute_edges(np.array([[100, 200]], np.uint8)).dark_left[0, 1]


def test_up_is_smaller_row():
    maps = compute_edges(np.array([[10], [90]], np.uint8))
    assert maps.dark_up[1, 0] and not maps.dark_down.any()


def test_matches_formula(rng):
    for _ in range(10):
        g = rng.integers(0, 200, (rng.integers(1, 15), rng.integers(1, 15)), dtype=np.uint8)
        cfg = EdgeConfig(int(rng.integers(0, 10)), int(rng.integers(0, 256)))
        ref = naive_edges(g, cfg.tau1, cfg.tau2)
        got = compute_edges(g, cfg).planes()
        for d in ref:
            assert (got[d] == ref[d]).all(), d


@settings(max_examples=80)
@given(images)
def test_properties(g):
    m = compute_edges(g)
    # neighbours exist
    assert not m.dark_left[:, 0].any() and not m.dark_right[:, -1].any()
    assert not m.dark_up[0].any() and not m.dark_down[-1].any()
    # a shared pair cannot point both ways
    assert not (m.dark_left[:, 1:] & m.dark_right[:, :-1]).any()
    assert not (m.dark_up[1:] & m.dark_down[:-1]).any()
    # mirror swaps left and right
    f = compute_edges(g[:, ::-1])
    assert (f.dark_left == m.dark_right[:, ::-1]).all()
    assert (f.dark_right == m.dark_left[:, ::-1]).all()
    assert (f.dark_up == m.dark_up[:, ::-1]).all()
    assert (f.dark_down == m.dark_down[:, ::-1]).all()
    # counter-clockwise quarter turn: left -> down, up -> left, right -> up, down -> right
    r = compute_edges(np.rot90(g))
    assert (r.dark_down == np.rot90(m.dark_left)).all()
    assert (r.dark_left == np.rot90(m.dark_up)).all()
    assert (r.dark_up == np.rot90(m.dark_right)).all()
    assert (r.dark_right == np.rot90(m.dark_down)).all()


@settings(max_examples=50)
@given(images)
def test_gates_hold_on_every_bit(g):
    m = compute_edges(g).planes()
    gi = g.astype(int)
    offsets = {"left": (0, -1), "right": (0, 1), "up": (-1, 0), "down": (1, 0)}
    for d, plane in m.items():
        dy, dx = offsets[d]
        for y, x in zip(*np.nonzero(plane)):
            dark = gi[y + dy, x + dx]
            assert dark < 100
            assert gi[y, x] - dark > 2


def test_census():
    z = np.zeros((3, 3), bool)
    empty = DirectionalEdgeMaps(z, z, z, z)
    assert edge_census(empty) == {"left": 0, "right": 0, "up": 0, "down": 0}
    one = z.copy()
    one[1, 1] = True
    assert edge_census(DirectionalEdgeMaps(one, z, z, z)) == {"left": 1, "right": 0, "up": 0, "down": 0}


def test_census_random(rng):
    planes = [rng.random((11, 7)) < 0.3 for _ in range(4)]
    counts = edge_census(DirectionalEdgeMaps(*planes))
    for name, plane in zip(("left", "right", "up", "down"), planes):
        assert counts[name] == sum(1 for v in plane.flat if v)


@pytest.mark.parametrize("kw", [dict(tau1=-1), dict(tau2=256)])
def test_invalid_config(kw):
    with pytest.raises(ConfigError):
        EdgeConfig(**kw)
