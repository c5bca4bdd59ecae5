# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from collections import Counter

import numpy as np
import pytest
from scipy import stats

import msgdrop as md
from msgdrop.masking import (enumerate_block_masks, sample_block_masks,
                             sample_element_masks)

N_SAMPLES = 100_000


def _layout(n_agents, obs_dim=4, agent=0):
    return md.BlockLayout.for_agent(agent, obs_dim, [obs_dim] * n_agents)


def test_layout_for_agent():
    layout = _layout(4, obs_dim=3, agent=2)
    assert layout.own_block == (0, 3)
    assert layout.message_blocks == [(0, 3, 3), (1, 6, 3), (3, 9, 3)]
    assert layout.total_dim == 12
    assert layout.message_dim == 9
    own, msg = layout.split(np.arange(12))
    assert np.array_equal(own, [0, 1, 2])
    assert np.array_equal(msg, np.arange(3, 12))


def test_layout_rejects_gaps():
    with pytest.raises(ValueError):
        md.BlockLayout((0, 3), [(1, 4, 3)])
    with pytest.raises(ValueError):
        md.BlockLayout((0, 3), [(1, 3, 3)], total_dim=7)


@pytest.mark.parametrize('n_agents', [3, 4, 5])
@pytest.mark.parametrize('p', [0.2, 0.5])
def test_block_keep_frequency(n_agents, p):
    layout = _layout(n_agents)
    rng = np.random.default_rng(100 + n_agents)
    masks = sample_block_masks(layout, p, False, rng, N_SAMPLES)
    assert masks.keep.shape == (N_SAMPLES, n_agents - 1)
    assert np.all(np.abs(masks.keep.mean(axis=0) - (1 - p)) < 0.01)
    keep = masks.multiplier(layout)
    assert np.all(keep[:, layout.own_index])
    # blocks are kept or dropped as a whole
    for _, oo, ll in layout.message_blocks:
        block = keep[:, oo:oo + ll]
        assert np.all(block.all(axis=1) | ~block.any(axis=1))


def test_three_agent_configurations_are_uniform():
    layout = _layout(3)
    rng = np.random.default_rng(7)
    masks = sample_block_masks(layout, 0.5, False, rng, N_SAMPLES)
    counts = Counter(map(tuple, masks.keep))
    assert len(counts) == 4
    for count in counts.values():
        assert abs(count / N_SAMPLES - 0.25) < 0.02
    assert stats.chisquare(list(counts.values())).pvalue > 1e-3


@pytest.mark.parametrize('n_agents', [2, 3, 4, 5])
def test_enumeration_counts(n_agents):
    layout = _layout(n_agents)
    masks = enumerate_block_masks(layout)
    assert len(masks) == 2**(n_agents - 1)
    assert len({mm.key() for mm in masks}) == len(masks)
    assert len(enumerate_block_masks(layout, include_own=True)) == \
        2**n_agents


def test_single_mask_sampling():
    layout = _layout(4)
    rng = np.random.default_rng(0)
    mask = md.sample_block_mask(layout, 0.3, rng=rng)
    assert not mask.batched and not mask.includes_own
    assert mask.keep.shape == (3,)
    full = md.sample_block_mask(layout, 0.3, include_own=True, rng=rng)
    assert full.includes_own and len(full.key()) == 4


@pytest.mark.parametrize('p', [0., 1.])
def test_rate_extremes(p):
    layout = _layout(4)
    rng = np.random.default_rng(1)
    keep = sample_block_masks(layout, p, False, rng, 100).keep
    assert np.all(keep) if p == 0. else not np.any(keep)


def test_rate_out_of_range():
    layout = _layout(3)
    rng = np.random.default_rng(0)
    with pytest.raises(ValueError):
        md.sample_block_mask(layout, 1.2, rng=rng)
    with pytest.raises(ValueError):
        md.exec_scale(np.zeros(layout.total_dim), layout, -0.1)


def test_apply_mask_zeroes_without_inflation():
    layout = _layout(3, obs_dim=2)
    xx = np.arange(1., 7.)
    masked = md.apply_mask(xx, layout, md.BlockMask([False, True]))
    assert np.array_equal(masked, [1., 2., 0., 0., 5., 6.])
    full = md.apply_mask(xx, layout, md.BlockMask([True, True], False))
    assert np.array_equal(full, [0., 0., 3., 4., 5., 6.])
    with pytest.raises(ValueError):
        md.apply_mask(xx[:-1], layout, md.BlockMask([True, True]))


@pytest.mark.parametrize('p,include_own', [(0.2, False), (0.5, False),
                                           (0.3, True)])
def test_monte_carlo_mean_matches_exec_scale(p, include_own):
    layout = _layout(5, obs_dim=3)
    rng = np.random.default_rng(11)
    xx = rng.standard_normal(layout.total_dim)
    masks = sample_block_masks(layout, p, include_own, rng, N_SAMPLES)
    masked = md.apply_mask(np.broadcast_to(xx, (N_SAMPLES, xx.size)), layout,
                           masks)
    expected = md.exec_scale(xx, layout, p, include_own)
    kept_rate = np.ones(layout.total_dim)
    kept_rate[layout.message_index] = 1 - p
    if include_own:
        kept_rate[layout.own_index] = 1 - p
    stderr = np.abs(xx) * np.sqrt(kept_rate * (1 - kept_rate) / N_SAMPLES)
    mean = masked.mean(axis=0)
    # summing 1e5 equal rows is exact only up to rounding
    assert np.all(np.abs(mean - expected) <= 3 * stderr
                  + 1e-9 * np.abs(expected))
    if not include_own:
        own = layout.own_index
        assert np.allclose(mean[own], xx[own], rtol=1e-9, atol=0.)


def test_element_masks():
    layout = _layout(3, obs_dim=5)
    rng = np.random.default_rng(3)
    keep = sample_element_masks(layout, 0.4, False, rng, N_SAMPLES)
    assert keep.dtype == bool
    assert np.all(keep[:, layout.own_index])
    rates = keep[:, layout.message_index].mean(axis=0)
    assert np.all(np.abs(rates - 0.6) < 0.01)
    single = md.sample_element_mask(layout, 0.4, rng=rng)
    assert single.shape == (layout.total_dim,)


def test_exec_scale():
    layout = _layout(3, obs_dim=2)
    xx = np.ones(6)
    assert np.allclose(md.exec_scale(xx, layout, 0.25),
                       [1., 1., .75, .75, .75, .75])
    assert np.allclose(md.exec_scale(xx, layout, 0.25, include_own=True),
                       np.full(6, .75))
