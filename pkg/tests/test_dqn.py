# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import numpy as np
import pytest

import msgdrop as md
from msgdrop.agents import QArchitecture, td_target

N_AGENTS = 3
OBS_DIM = 6
ARCH = QArchitecture(f_sizes=(16, 12), g_size=10, h_hidden=(8,), n_actions=5)


def _layout():
    return md.BlockLayout.for_agent(0, OBS_DIM, [OBS_DIM] * N_AGENTS)


def _agent(mode, p=0., seed=1, mask_seed=2, **kwargs):
    mode = md.AgentMode(mode, p)
    layout = (_layout() if mode.uses_messages
              else md.BlockLayout((0, OBS_DIM), [], OBS_DIM))
    return md.DQNAgent(0, layout, mode, ARCH, seed=seed,
                       mask_rng=np.random.default_rng(mask_seed), **kwargs)


def _memory(msg_dim, n=400, seed=0):
    rng = np.random.default_rng(seed)
    memory = md.ReplayMemory(n, OBS_DIM, msg_dim)
    for _ in range(n):
        memory.push(md.Transition(
            rng.standard_normal(OBS_DIM), rng.standard_normal(msg_dim),
            int(rng.integers(5)), float(rng.standard_normal()),
            rng.standard_normal(OBS_DIM), rng.standard_normal(msg_dim),
            bool(rng.random() < 0.1)))
    return memory


def _train(agent, memory, steps, seed=5):
    rng = np.random.default_rng(seed)
    return [agent.train_step(memory, rng) for _ in range(steps)]


def test_zero_rate_dropout_reduces_to_plain_dcc():
    memory = _memory(OBS_DIM * (N_AGENTS - 1))
    dcc = _agent('DCC', target_sync=30)
    dcc_md = _agent('DCC_MD', 0., target_sync=30)
    assert dcc.online.equals(dcc_md.online)
    _train(dcc, memory, 100)
    _train(dcc_md, memory, 100)
    assert dcc.online.equals(dcc_md.online)
    assert dcc.target.equals(dcc_md.target)


def test_full_dropout_ignores_messages():
    memory = _memory(OBS_DIM * (N_AGENTS - 1))
    agent = _agent('DCC_MD', 1.)
    _train(agent, memory, 50)
    rng = np.random.default_rng(9)
    oo = rng.standard_normal(OBS_DIM)
    reference = agent.q_values(oo, np.zeros(OBS_DIM * (N_AGENTS - 1)))
    for _ in range(20):
        mm = 10. * rng.standard_normal(OBS_DIM * (N_AGENTS - 1))
        assert np.array_equal(agent.q_values(oo, mm), reference)


def test_fdc_has_no_message_network():
    agent = _agent('FDC')
    assert set(agent.online.subnets()) == {'f', 'h'}
    assert agent.message_dim == 0
    memory = _memory(0)
    losses = _train(agent, memory, 5)
    assert np.all(np.isfinite(losses))


def test_concat_variant_uses_one_network():
    agent = _agent('CONCAT_MD', 0.2)
    assert set(agent.online.subnets()) == {'body'}
    assert agent.online.body.input_dim == OBS_DIM * N_AGENTS


def test_masks_are_per_item():
    agent = _agent('DCC_MD', 0.5, batch_size=64)
    _train(agent, _memory(OBS_DIM * (N_AGENTS - 1)), 1)
    masks = agent.last_masks
    assert masks.shape == (64, OBS_DIM * N_AGENTS)
    assert np.all(masks[:, :OBS_DIM])
    assert len({tuple(row) for row in masks}) > 1


def test_full_md_drops_own_block():
    agent = _agent('FULL_MD', 0.5, batch_size=256)
    _train(agent, _memory(OBS_DIM * (N_AGENTS - 1)), 1)
    own = agent.last_masks[:, :OBS_DIM]
    assert not own.all() and own.any()


def test_element_wise_dropout_masks():
    agent = _agent('SD', 0.5, batch_size=64)
    _train(agent, _memory(OBS_DIM * (N_AGENTS - 1)), 1)
    block = agent.last_masks[:, OBS_DIM:2 * OBS_DIM]
    mixed = block.any(axis=1) & ~block.all(axis=1)
    assert mixed.any()


def test_double_dqn_target():
    agent = _agent('DCC_MD', 0.25, gamma=0.9)
    agent.target.h.biases[-1][:] += np.arange(5.)
    memory = _memory(OBS_DIM * (N_AGENTS - 1), n=20)
    batch = memory.contents()
    layout = agent.layout
    masks = agent.sample_masks(len(batch))
    yy = td_target(batch, agent.online, agent.target, 0.25, 0.9, masks)

    x_next = np.concatenate([batch.o_next, batch.m_next], axis=1)
    a_star = np.argmax(agent.online.forward(
        md.exec_scale(x_next, layout, 0.25))[0], axis=1)
    q_target = agent.target.forward(md.apply_mask(x_next, layout, masks))[0]
    expected = batch.r + 0.9 * q_target[np.arange(20), a_star]
    expected[batch.terminal] = batch.r[batch.terminal]
    assert np.allclose(yy, expected)
    assert np.array_equal(yy[batch.terminal], batch.r[batch.terminal])


def test_target_sync_cadence():
    agent = _agent('DCC', target_sync=3)
    memory = _memory(OBS_DIM * (N_AGENTS - 1))
    _train(agent, memory, 2)
    assert not agent.target.equals(agent.online)
    _train(agent, memory, 1)
    assert agent.target.equals(agent.online)


def test_act():
    agent = _agent('DCC_MD', 0.2)
    rng = np.random.default_rng(0)
    oo = rng.standard_normal(OBS_DIM)
    mm = rng.standard_normal(OBS_DIM * (N_AGENTS - 1))
    greedy = int(np.argmax(agent.q_values(oo, mm)))
    assert all(agent.act(oo, mm, 0., rng) == greedy for _ in range(10))
    counts = np.bincount([agent.act(oo, mm, 1., rng) for _ in range(5000)],
                         minlength=5)
    assert np.all(np.abs(counts / 5000 - 0.2) < 0.03)


def test_ties_pick_lowest_action():
    agent = _agent('DCC')
    for bb in agent.online.h.biases:
        bb[:] = 0.
    agent.online.h.weights[-1][:] = 0.
    oo = np.ones(OBS_DIM)
    mm = np.ones(OBS_DIM * (N_AGENTS - 1))
    assert agent.act(oo, mm, 0., np.random.default_rng(0)) == 0


def test_learns_constant_terminal_reward():
    agent = _agent('DCC_MD', 0.2, lr=1e-2, batch_size=32)
    rng = np.random.default_rng(0)
    memory = md.ReplayMemory(200, OBS_DIM, OBS_DIM * (N_AGENTS - 1))
    for _ in range(200):
        memory.push(md.Transition(
            rng.standard_normal(OBS_DIM),
            rng.standard_normal(OBS_DIM * (N_AGENTS - 1)), 2, 1.,
            np.zeros(OBS_DIM), np.zeros(OBS_DIM * (N_AGENTS - 1)), True))
    losses = _train(agent, memory, 400)
    assert np.mean(losses[-20:]) < 0.1 * np.mean(losses[:20])


def test_epsilon_schedule():
    schedule = md.EpsilonSchedule(1., 0.02, 100)
    assert schedule(0) == 1.
    assert np.isclose(schedule(50), 0.51)
    assert schedule(100) == schedule(10_000) == 0.02
    assert md.EpsilonSchedule(1., 0.1, 0)(0) == 0.1


def test_save_load(tmp_path):
    agent = _agent('DCC_MD', 0.3)
    _train(agent, _memory(OBS_DIM * (N_AGENTS - 1)), 3)
    agent.save(tmp_path / 'agent')
    loaded = md.DQNAgent.load(tmp_path / 'agent')
    assert loaded.online.equals(agent.online)
    assert loaded.mode == agent.mode
    assert loaded.layout.message_blocks == agent.layout.message_blocks
    assert loaded.updates == 3


def test_mode_family_is_checked():
    with pytest.raises(ValueError):
        md.DQNAgent(0, _layout(), md.AgentMode('MADDPG', 0.), ARCH)
    with pytest.raises(ValueError):
        md.AgentMode('DCC_MD', 1.5)
    with pytest.raises(ValueError):
        md.AgentMode('XYZ')
