# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .base import EnvStep, MultiAgentEnv

ACCELERATIONS = np.array([[0., 0.], [1., 0.], [-1., 0.], [0., 1.], [0., -1.]])


@dataclass
class NavConfig:
    '''
    Cooperative navigation settings (particle world with a damped double
    integrator).

    Args:
        n_agents (int): number of agents N.
        n_landmarks (int): number of landmarks L.
        sensing_radius (float): other agents farther than this are zeroed
            in the observation.
        r2_minus (float): penalty per collision partner.
        dt (float): integration timestep.
        damping (float): fraction of velocity lost per step.
        agent_radius (float): collision radius of an agent.
        accel (float): magnitude of one discrete acceleration.
        world_half_width (float): positions are confined to this box.
        spawn_half_width (float): agents and landmarks start in this box.
        horizon (int): episode length T.
    '''

    n_agents: int = 8
    n_landmarks: int = 8
    sensing_radius: float = 1.
    r2_minus: float = 2.
    dt: float = 0.1
    damping: float = 0.25
    agent_radius: float = 0.1
    accel: float = 1.
    world_half_width: float = 1.5
    spawn_half_width: float = 1.
    horizon: int = 100

    def __post_init__(self):
        if self.n_agents <= 0 or self.n_landmarks <= 0:
            raise ValueError('n_agents and n_landmarks must be positive')
        if self.horizon <= 0 or self.dt <= 0 or self.world_half_width <= 0:
            raise ValueError('horizon, dt and world_half_width must be '
                             'positive')
        if not 0. <= self.damping <= 1.:
            raise ValueError(f'damping {self.damping} outside [0, 1]')
        if self.spawn_half_width > self.world_half_width:
            raise ValueError('spawn box larger than the world')

    @property
    def obs_dim(self):
        return 4 + 2 * self.n_landmarks + 2 * (self.n_agents - 1)


class NavState:

    def __init__(self, config, positions, velocities, landmarks, rng):
        self.config = config
        self.positions = np.array(positions, dtype=np.float64)
        self.velocities = np.array(velocities, dtype=np.float64)
        self.landmarks = np.array(landmarks, dtype=np.float64)
        self.rng = rng
        self.t = 0


def nav_reset(cfg, seed=None):
    rng = np.random.default_rng(seed)
    ww = cfg.spawn_half_width
    positions = rng.uniform(-ww, ww, size=(cfg.n_agents, 2))
    landmarks = rng.uniform(-ww, ww, size=(cfg.n_landmarks, 2))
    return NavState(cfg, positions, np.zeros((cfg.n_agents, 2)), landmarks,
                    rng)


def _accelerations(cfg, joint_action):
    out = np.zeros((cfg.n_agents, 2))
    if len(joint_action) != cfg.n_agents:
        raise ValueError(f'expected {cfg.n_agents} actions, got '
                         f'{len(joint_action)}')
    for ii, aa in enumerate(joint_action):
        arr = np.asarray(aa, dtype=np.float64)
        if arr.ndim == 0:
            if not float(arr).is_integer() or not 0 <= int(arr) < len(
                    ACCELERATIONS):
                raise ValueError(f'action {aa} not recognized')
            out[ii] = ACCELERATIONS[int(arr)]
        elif arr.shape == (2,):
            if not np.all(np.isfinite(arr)):
                raise ValueError(f'non-finite action {aa}')
            out[ii] = arr / max(1., np.linalg.norm(arr))
        else:
            raise ValueError(f'action of shape {arr.shape} not recognized')
    return cfg.accel * out


def collision_counts(state):
    '''Number of other agents each agent overlaps with.'''
    cfg = state.config
    dist = cdist(state.positions, state.positions)
    touching = dist < 2 * cfg.agent_radius
    np.fill_diagonal(touching, False)
    return touching.sum(axis=1)


def nav_rewards(state):
    cfg = state.config
    nearest = cdist(state.positions, state.landmarks).min(axis=1)
    return -nearest - cfg.r2_minus * collision_counts(state)


def occupied_landmarks(state):
    dist = cdist(state.landmarks, state.positions)
    return int(np.sum(dist.min(axis=1) < state.config.agent_radius))


def nav_step(state, joint_action):
    cfg = state.config
    acc = _accelerations(cfg, joint_action)

    state.velocities = state.velocities * (1. - cfg.damping) + acc * cfg.dt
    state.positions = state.positions + state.velocities * cfg.dt
    ww = cfg.world_half_width
    outside = np.abs(state.positions) > ww
    state.positions = np.clip(state.positions, -ww, ww)
    state.velocities[outside] = 0.

    rewards = nav_rewards(state)
    state.t += 1
    terminal = state.t >= cfg.horizon
    info = {'collisions': int(collision_counts(state).sum() // 2),
            'catches': occupied_landmarks(state) if terminal else 0}
    return EnvStep(nav_observe_all(state), rewards, bool(terminal), info)


def nav_observe(state, agent):
    '''
    Own position and velocity, landmark offsets, then the offsets of the
    other agents in index order (zero beyond the sensing radius).
    '''
    cfg = state.config
    pos = state.positions[agent]
    landmarks = state.landmarks - pos
    others = np.delete(state.positions, agent, axis=0) - pos
    far = np.linalg.norm(others, axis=1) >= cfg.sensing_radius
    others[far] = 0.
    return np.concatenate([pos, state.velocities[agent],
                           landmarks.reshape(-1), others.reshape(-1)])


def nav_observe_all(state):
    return [nav_observe(state, ii) for ii in range(state.config.n_agents)]


class NavigationEnv(MultiAgentEnv):

    def __init__(self, config=None, **kwargs):
        if config is None:
            config = NavConfig(**kwargs)
        super().__init__(config)

    @property
    def n_agents(self):
        return self.config.n_agents

    @property
    def obs_dim(self):
        return self.config.obs_dim

    @property
    def n_actions(self):
        return len(ACCELERATIONS)

    def _reset(self, seed):
        return nav_reset(self.config, seed)

    def _step(self, joint_action):
        return nav_step(self.state, joint_action)

    def _observe(self, agent):
        return nav_observe(self.state, agent)

    def agent_positions(self):
        return self.state.positions.copy()
