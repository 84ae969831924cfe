import itertools

import numpy as np
import pytest

from polypgate.edges import DirectionalEdgeMaps, compute_edges
from polypgate.errors import ConfigError
from polypgate.fusion import fuse

from oracles import declarative_fuse


def maps(shape, **bits):
    planes = {d: np.zeros(shape, bool) for d in ("left", "right", "up", "down")}
    for name, coords in bits.items():
        for x, y in coords:
            planes[name][y, x] = True
    return DirectionalEdgeMaps(planes["left"], planes["right"], planes["up"], planes["down"])


def random_maps(rng, shape, p=0.2):
    return DirectionalEdgeMaps(*(rng.random(shape) < p for _ in range(4)))


def check_against_oracle(pcm, e, lookback):
    out = fuse(pcm, e, lookback=lookback)
    hm, vm, final = declarative_fuse(pcm, e.dark_left, e.dark_right, e.dark_up, e.dark_down, lookback)
    assert (out.h_mask == hm).all()
    assert (out.v_mask == vm).all()
    assert (out.final_mask == final).all()
    return out


@pytest.mark.parametrize("lookback", [True, False])
def test_empty_pcm(rng, lookback):
    out = fuse(np.zeros((5, 5), bool), random_maps(rng, (5, 5)), lookback)
    assert out.final_count == 0 and not out.h_mask.any() and not out.v_mask.any()


@pytest.mark.parametrize("lookback", [True, False])
def test_full_pcm_without_edges(lookback):
    out = fuse(np.ones((5, 5), bool), maps((5, 5)), lookback)
    assert out.final_count == 0


@pytest.mark.parametrize("lookback", [True, False])
def test_worked_8x8(lookback):
    pcm = np.zeros((8, 8), bool)
    pcm[2:6, 2:6] = True
    e = maps((8, 8), left=[(2, 3)], up=[(3, 2)])
    out = check_against_oracle(pcm, e, lookback)
    expected_h = np.zeros((8, 8), bool)
    expected_h[3, 2:6] = True
    expected_v = np.zeros((8, 8), bool)
    expected_v[2:6, 3] = True
    assert (out.h_mask == expected_h).all()
    assert (out.v_mask == expected_v).all()
    assert list(zip(*np.nonzero(out.final_mask))) == [(3, 3)]
    assert out.final_count == 1


def test_support_starts_at_trigger():
    pcm = np.ones((1, 6), bool)
    out = fuse(pcm, maps((1, 6), left=[(3, 0)]))
    assert out.h_mask.tolist() == [[False, False, False, True, True, True]]


def test_zero_pcm_pixel_ends_support():
    pcm = np.array([[1, 1, 0, 1, 1]], bool)
    out = fuse(pcm, maps((1, 5), left=[(0, 0)]), lookback=False)
    assert out.h_mask.tolist() == [[True, True, False, False, False]]


def test_lookback_reaches_edge_before_the_run():
    # edge at x=1 on a non-PCM pixel, run starts at x=3
    pcm = np.array([[0, 0, 0, 1, 1]], bool)
    e = maps((1, 5), left=[(1, 0)])
    assert fuse(pcm, e).h_mask.tolist() == [[False, False, False, True, True]]
    assert not fuse(pcm, e, lookback=False).h_mask.any()


def test_opposite_edge_disarms_lookback():
    # dark_right at x=2 means dark neighbour at x=3: the run behind it is outside the bright side
    pcm = np.array([[0, 0, 0, 0, 1, 1]], bool)
    e = maps((1, 6), left=[(1, 0)], right=[(2, 0)])
    assert not fuse(pcm, e).h_mask[:, :4].any()
    # the right-to-left pass is armed by dark_right at x=2 only for pixels at or left of it
    assert not fuse(pcm, e).h_mask.any()


def test_all_3x3_patterns_against_oracle(rng):
    for bits in range(512):
        pcm = np.array([(bits >> k) & 1 for k in range(9)], bool).reshape(3, 3)
        for _ in range(4):
            e = random_maps(rng, (3, 3), p=0.3)
            for lookback in (True, False):
                out = check_against_oracle(pcm, e, lookback)
                assert not (out.h_mask & ~pcm).any() and not (out.v_mask & ~pcm).any()


def test_random_larger_against_oracle(rng):
    for _ in range(40):
        shape = tuple(int(v) for v in rng.integers(1, 16, 2))
        pcm = rng.random(shape) < 0.7
        e = random_maps(rng, shape, p=0.15)
        for lookback in (True, False):
            check_against_oracle(pcm, e, lookback)


def test_horizontal_ignores_vertical_planes(rng):
    pcm = rng.random((10, 10)) < 0.7
    e = random_maps(rng, (10, 10))
    e2 = DirectionalEdgeMaps(e.dark_left, e.dark_right, ~e.dark_up, np.zeros_like(e.dark_down))
    assert (fuse(pcm, e).h_mask == fuse(pcm, e2).h_mask).all()
    e3 = DirectionalEdgeMaps(~e.dark_left, e.dark_left, e.dark_up, e.dark_down)
    assert (fuse(pcm, e).v_mask == fuse(pcm, e3).v_mask).all()


def test_run_locality(rng):
    for _ in range(30):
        pcm = rng.random((1, 30)) < 0.75
        e = random_maps(rng, (1, 30), p=0.2)
        before = fuse(pcm, e).h_mask
        runs = [list(g) for k, g in itertools.groupby(range(30), key=lambda x: pcm[0, x]) if k]
        if not runs:
            continue
        cleared = pcm.copy()
        run = runs[int(rng.integers(len(runs)))]
        cleared[0, run] = False
        after = fuse(cleared, e).h_mask
        outside = np.ones(30, bool)
        outside[run] = False
        assert (after[0, outside] == before[0, outside]).all()


def test_mirror_equivariance(rng):
    for _ in range(20):
        pcm = rng.random((9, 12)) < 0.7
        e = random_maps(rng, (9, 12))
        mirrored = DirectionalEdgeMaps(
            e.dark_right[:, ::-1], e.dark_left[:, ::-1], e.dark_up[:, ::-1], e.dark_down[:, ::-1]
        )
        a = fuse(pcm, e)
        b = fuse(pcm[:, ::-1], mirrored)
        assert (b.final_mask == a.final_mask[:, ::-1]).all()


def test_from_real_edges_containment(rng):
    g = rng.integers(0, 256, (30, 30), dtype=np.uint8)
    pcm = rng.random((30, 30)) < 0.5
    out = fuse(pcm, compute_edges(g))
    assert not (out.final_mask & ~out.h_mask).any()
    assert not (out.final_mask & ~out.v_mask).any()
    assert not (out.h_mask & ~pcm).any()
    assert out.final_count == int(out.final_mask.sum())


def test_shape_mismatch():
    with pytest.raises(ConfigError):
        fuse(np.zeros((3, 3), bool), maps((3, 4)))
