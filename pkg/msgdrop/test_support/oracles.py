# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import math

import numpy as np

from ..envs.pursuit import PursuitState


def randomize_biases(net, rng, scale=0.5):
    '''Replace the zero initial biases so relu units sit away from kinks.'''
    for bb in net.biases:
        bb[:] = rng.uniform(-scale, scale, size=bb.shape)
    return net


def loop_forward(net, x):
    '''Unit-by-unit evaluation of an Mlp on a single input vector.'''
    act = [float(vv) for vv in x]
    for ww, bb, name in zip(net.weights, net.biases, net.activations):
        out = []
        for jj in range(ww.shape[0]):
            zz = float(bb[jj])
            for kk in range(ww.shape[1]):
                zz += float(ww[jj, kk]) * act[kk]
            if name == 'relu':
                zz = max(zz, 0.)
            elif name == 'tanh':
                zz = math.tanh(zz)
            out.append(zz)
        act = out
    return np.array(act)


def random_pursuit_state(cfg, rng):
    '''Pursuers and evaders on distinct uniformly random cells.'''
    n_total = cfg.n_pursuers + cfg.n_evaders
    cells = rng.choice(cfg.width * cfg.height, size=n_total, replace=False)
    xy = np.stack([cells // cfg.height, cells % cfg.height], axis=1)
    return PursuitState(cfg, xy[:cfg.n_pursuers], xy[cfg.n_pursuers:],
                        np.random.default_rng(int(rng.integers(2**31 - 1))))


def pursuit_observation_scan(state, agent):
    cfg = state.config
    dd = cfg.sensing_range
    size = 2 * dd + 1
    me = tuple(state.pursuers[agent])
    pursuers = [tuple(pp) for pp in state.pursuers]
    evaders = [tuple(ee) for ee in state.evaders]
    obs = np.zeros((3, size, size))
    for ii in range(size):
        for jj in range(size):
            cell = (me[0] - dd + ii, me[1] - dd + jj)
            if not (0 <= cell[0] < cfg.width and 0 <= cell[1] < cfg.height):
                obs[2, ii, jj] = 1.
                continue
            for kk, pp in enumerate(pursuers):
                if kk != agent and pp == cell:
                    obs[0, ii, jj] = 1.
            if cell in evaders:
                obs[1, ii, jj] = 1.
    return obs.reshape(-1)


def pursuit_capture_scan(state):
    '''Captured evaders and per-pursuer capture counts by list lookup.'''
    cfg = state.config
    pursuers = [tuple(pp) for pp in state.pursuers]
    captured = []
    counts = np.zeros(len(pursuers), dtype=np.int64)
    for kk, (ex, ey) in enumerate(state.evaders):
        sides = [(ex + 1, ey), (ex - 1, ey), (ex, ey + 1), (ex, ey - 1)]
        sides = [ss for ss in sides
                 if 0 <= ss[0] < cfg.width and 0 <= ss[1] < cfg.height]
        if all(ss in pursuers for ss in sides):
            captured.append(kk)
            for ss in sides:
                counts[pursuers.index(ss)] += 1
    return captured, counts


def pursuit_reward_scan(cfg, counts, boundary_hits):
    return np.array([-cfg.r1_minus - cfg.r2_minus * bool(hh) + cfg.r_plus * cc
                     for cc, hh in zip(counts, boundary_hits)])


def navigation_reward_scan(state):
    cfg = state.config
    out = []
    for ii, pos in enumerate(state.positions):
        nearest = min(math.dist(pos, ll) for ll in state.landmarks)
        collisions = sum(1 for jj, other in enumerate(state.positions)
                         if jj != ii
                         and math.dist(pos, other) < 2 * cfg.agent_radius)
        out.append(-nearest - cfg.r2_minus * collisions)
    return np.array(out)
