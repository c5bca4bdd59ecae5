# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import copy

import numpy as np
import pytest

import msgdrop as md
from msgdrop.envs import pursuit
from msgdrop.test_support import (pursuit_capture_scan,
                                  pursuit_observation_scan,
                                  pursuit_reward_scan, random_pursuit_state)

N_STATES = 10_000

CONFIGS = [
    md.PursuitConfig(n_pursuers=4, n_evaders=2, width=10, height=10),
    md.PursuitConfig(n_pursuers=6, n_evaders=3, width=5, height=5,
                     sensing_range=2),
]


def _states(n_states, seed=0):
    rng = np.random.default_rng(seed)
    for ii in range(n_states):
        yield random_pursuit_state(CONFIGS[ii % len(CONFIGS)], rng)


def test_center_cells():
    assert pursuit.center_cells(15, 15, 2) == [(7, 7), (7, 6)]
    assert pursuit.center_cells(10, 10, 3) == [(4, 4), (5, 4), (4, 5)]


def test_reset():
    cfg = md.PursuitConfig()
    state = pursuit.pursuit_reset(cfg, seed=4)
    assert [tuple(ee) for ee in state.evaders] == [(7, 7), (7, 6)]
    cells = {tuple(cc) for cc in state.pursuers} | {(7, 7), (7, 6)}
    assert len(cells) == cfg.n_pursuers + cfg.n_evaders
    again = pursuit.pursuit_reset(cfg, seed=4)
    assert np.array_equal(state.pursuers, again.pursuers)


def test_config_validation():
    with pytest.raises(ValueError):
        md.PursuitConfig(n_pursuers=0)
    with pytest.raises(ValueError):
        md.PursuitConfig(n_pursuers=20, width=4, height=4)


def test_observation_matches_grid_scan():
    for state in _states(N_STATES):
        observations = pursuit.pursuit_observe_all(state)
        for agent, obs in enumerate(observations):
            assert obs.shape == (state.config.obs_dim,)
            assert np.array_equal(obs, pursuit_observation_scan(state, agent))


def test_capture_matches_grid_scan():
    n_captures = 0
    for state in _states(N_STATES, seed=1):
        captured, counts = pursuit.pursuit_captures(state)
        ref_captured, ref_counts = pursuit_capture_scan(state)
        assert captured == ref_captured
        assert np.array_equal(counts, ref_counts)
        n_captures += len(captured)
    assert n_captures > 0


def test_rewards_match_grid_scan():
    rng = np.random.default_rng(2)
    for state in _states(N_STATES, seed=3):
        cfg = state.config
        actions = rng.integers(5, size=cfg.n_pursuers)
        ref = copy.deepcopy(state)
        pursuit._move_evaders(ref)
        hits = pursuit._move_pursuers(ref, list(actions))
        _, counts = pursuit_capture_scan(ref)
        expected = pursuit_reward_scan(cfg, counts, hits)

        step = pursuit.pursuit_step(state, actions)
        assert np.array_equal(step.rewards, expected)
        assert step.info['boundary_hits'] == hits.sum()


def test_corner_capture_rewards_every_capturer():
    cfg = md.PursuitConfig(n_pursuers=3, n_evaders=1, width=5, height=5)
    state = pursuit.PursuitState(cfg, [[1, 0], [0, 1], [4, 4]], [[0, 0]],
                                 np.random.default_rng(0))
    # the boxed-in evader cannot move
    step = pursuit.pursuit_step(state, [pursuit.STAY] * 3)
    assert step.info['catches'] == 1
    assert np.allclose(step.rewards, [-0.05 + 5., -0.05 + 5., -0.05])
    assert step.terminal
    assert len(state.evaders) == 0


def test_boundary_penalty_only_when_leaving_map():
    cfg = md.PursuitConfig(n_pursuers=2, n_evaders=1, width=5, height=5)
    state = pursuit.PursuitState(cfg, [[0, 2], [1, 2]], [[4, 4]],
                                 np.random.default_rng(0))
    step = pursuit.pursuit_step(state, [pursuit.WEST, pursuit.WEST])
    # pursuer 0 walks into the wall, pursuer 1 into pursuer 0
    assert np.allclose(step.rewards, [-0.05 - 0.5, -0.05])
    assert [tuple(pp) for pp in state.pursuers] == [(0, 2), (1, 2)]


def test_observation_layout():
    cfg = md.PursuitConfig(n_pursuers=2, n_evaders=1, width=5, height=5,
                           sensing_range=1)
    state = pursuit.PursuitState(cfg, [[0, 0], [1, 0]], [[0, 1]],
                                 np.random.default_rng(0))
    obs = pursuit.pursuit_observe(state, 0).reshape(3, 3, 3)
    # window [i, j] covers cell (x - 1 + i, y - 1 + j)
    assert obs[0, 1, 1] == 0.
    assert obs[0, 2, 1] == 1.
    assert obs[1, 1, 2] == 1.
    assert np.array_equal(obs[2, 0, :], [1., 1., 1.])
    assert np.array_equal(obs[2, :, 0], [1., 1., 1.])
    assert obs[2, 1:, 1:].sum() == 0.


def test_invalid_action():
    env = md.PursuitEnv(md.PursuitConfig(n_pursuers=2, n_evaders=1,
                                         width=5, height=5))
    env.reset(seed=0)
    with pytest.raises(ValueError):
        env.step([0, 5])
    with pytest.raises(ValueError):
        env.step([0])


def test_horizon_and_determinism():
    cfg = md.PursuitConfig(n_pursuers=3, n_evaders=2, width=8, height=8,
                           horizon=20)

    def rollout():
        env = md.PursuitEnv(cfg)
        obs = env.reset(seed=9)
        rng = np.random.default_rng(1)
        trace = [np.concatenate(obs)]
        for tt in range(cfg.horizon):
            step = env.step(rng.integers(5, size=3))
            trace.append(np.concatenate(step.observations))
            if step.terminal:
                break
        return tt, np.array(trace)

    t1, trace1 = rollout()
    t2, trace2 = rollout()
    assert t1 == t2 <= cfg.horizon - 1
    assert np.array_equal(trace1, trace2)


def test_messages_with_broken_links():
    cfg = md.PursuitConfig(n_pursuers=3, n_evaders=1, width=6, height=6)
    env = md.PursuitEnv(cfg)
    obs = env.reset(seed=0)
    messages = env.messages(obs)
    received = env.messages_for(1, messages)
    assert np.array_equal(received, np.concatenate([obs[0], obs[2]]))
    broken = env.messages_for(1, messages, np.array([True, True, False]))
    assert np.array_equal(broken[:cfg.obs_dim], obs[0])
    assert not broken[cfg.obs_dim:].any()
    assert env.message_dim == cfg.obs_dim


def test_message_encoder():
    cfg = md.PursuitConfig(n_pursuers=3, n_evaders=1, width=6, height=6)
    env = md.PursuitEnv(cfg)
    obs = env.reset(seed=0)
    ae = md.Autoencoder.build(cfg.obs_dim, 16, 8, seed=0)
    env.set_message_encoder(ae)
    assert env.message_dim == 8
    assert np.allclose(env.message_of(0, obs[0]), ae.encode(obs[0]))
    env.set_message_encoder(None)
    assert env.message_dim == cfg.obs_dim


def test_trajectory_recorder(tmp_path):
    env = md.PursuitEnv(md.PursuitConfig(n_pursuers=2, n_evaders=1,
                                         width=5, height=5))
    env.reset(seed=0)
    path = tmp_path / 'traj.jsonl'
    with md.TrajectoryRecorder(path) as recorder:
        step = env.step([0, 1])
        recorder.record(0, 0, env, [0, 1], step.rewards)
    records = md.envs.read_trajectory(path)
    assert len(records) == 2
    assert set(records[0]) == {'episode', 't', 'agent', 'x', 'y', 'action',
                               'reward'}
    assert records[1]['action'] == 1
