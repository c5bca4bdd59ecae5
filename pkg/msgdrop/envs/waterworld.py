# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist

from .base import EnvStep, MultiAgentEnv

N_SENSORS = 25
SENSOR_CHANNELS = 7
OBSTACLE_CENTER = np.array([0.5, 0.5])


@dataclass
class WaterConfig:
    '''
    Waterworld settings: pursuers in the unit square with one central
    circular obstacle, food that needs ``coop_k`` simultaneous touchers and
    poison to avoid.

    Args:
        n_pursuers (int): number of pursuers N.
        n_food (int): number of food targets, ``N // 2`` when 0.
        n_poison (int): number of poison targets, ``N`` when 0.
        coop_k (int): touchers needed to capture a food target.
        n_sensors (int): must be 25.
        r1_plus (float): reward of every toucher of a captured food.
        r2_plus (float): reward for touching food.
        r1_minus (float): penalty for touching poison.
        horizon (int): episode length T.
        obstacle_radius (float): radius of the central obstacle.
        sensor_range (float): length of the sensor rays.
        pursuer_radius (float): radius of a pursuer.
        food_radius (float): radius of a food target.
        poison_radius (float): radius of a poison target.
        max_accel (float): velocity change of a unit action.
        max_speed (float): pursuer speed cap per step.
        target_speed (float): speed of food and poison per step.
    '''

    n_pursuers: int = 8
    n_food: int = 0
    n_poison: int = 0
    coop_k: int = 4
    n_sensors: int = N_SENSORS
    r1_plus: float = 10.
    r2_plus: float = 0.01
    r1_minus: float = 0.1
    horizon: int = 500
    obstacle_radius: float = 0.15
    sensor_range: float = 0.3
    pursuer_radius: float = 0.015
    food_radius: float = 0.03
    poison_radius: float = 0.0225
    max_accel: float = 0.01
    max_speed: float = 0.02
    target_speed: float = 0.01

    def __post_init__(self):
        if self.n_pursuers <= 0:
            raise ValueError('n_pursuers must be positive')
        if self.n_food == 0:
            self.n_food = max(1, self.n_pursuers // 2)
        if self.n_poison == 0:
            self.n_poison = self.n_pursuers
        if self.n_sensors != N_SENSORS:
            raise ValueError(f'sensor count is fixed at {N_SENSORS}, got '
                             f'{self.n_sensors}')
        if not 1 <= self.coop_k <= self.n_pursuers:
            raise ValueError(f'coop_k={self.coop_k} must lie in '
                             f'[1, {self.n_pursuers}]')
        if self.horizon <= 0:
            raise ValueError('horizon must be positive')
        if self.max_speed <= 0 or self.sensor_range <= 0:
            raise ValueError('max_speed and sensor_range must be positive')

    @property
    def obs_dim(self):
        return SENSOR_CHANNELS * N_SENSORS + 4


def sensor_directions(n_sensors=N_SENSORS):
    angles = 2 * np.pi * np.arange(n_sensors) / n_sensors
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


class WaterState:

    def __init__(self, config, positions, velocities, food, food_vel,
                 poison, poison_vel, rng):
        self.config = config
        self.positions = np.array(positions, dtype=np.float64)
        self.velocities = np.array(velocities, dtype=np.float64)
        self.food = np.array(food, dtype=np.float64)
        self.food_vel = np.array(food_vel, dtype=np.float64)
        self.poison = np.array(poison, dtype=np.float64)
        self.poison_vel = np.array(poison_vel, dtype=np.float64)
        self.rng = rng
        self.t = 0
        self.total_catches = 0


def _free_positions(rng, count, radius, cfg):
    '''Uniform positions inside the square and outside the obstacle.'''
    out = np.zeros((count, 2))
    for ii in range(count):
        while True:
            cand = rng.uniform(radius, 1. - radius, size=2)
            if np.linalg.norm(cand - OBSTACLE_CENTER) > (cfg.obstacle_radius
                                                         + radius):
                out[ii] = cand
                break
    return out


def _random_velocities(rng, count, speed):
    angles = rng.uniform(0., 2 * np.pi, size=count)
    return speed * np.stack([np.cos(angles), np.sin(angles)], axis=1)


def water_reset(cfg, seed=None):
    rng = np.random.default_rng(seed)
    positions = _free_positions(rng, cfg.n_pursuers, cfg.pursuer_radius, cfg)
    food = _free_positions(rng, cfg.n_food, cfg.food_radius, cfg)
    food_vel = _random_velocities(rng, cfg.n_food, cfg.target_speed)
    poison = _free_positions(rng, cfg.n_poison, cfg.poison_radius, cfg)
    poison_vel = _random_velocities(rng, cfg.n_poison, cfg.target_speed)
    return WaterState(cfg, positions, np.zeros((cfg.n_pursuers, 2)), food,
                      food_vel, poison, poison_vel, rng)


def _bounce(pos, vel, radius, cfg):
    '''Reflect off the walls and push out of the obstacle, in place.'''
    low = pos < radius
    high = pos > 1. - radius
    vel[low | high] *= -1.
    np.clip(pos, radius, 1. - radius, out=pos)

    offset = pos - OBSTACLE_CENTER
    dist = np.linalg.norm(offset, axis=1)
    limit = cfg.obstacle_radius + radius
    inside = dist < limit
    if np.any(inside):
        normal = offset[inside] / np.maximum(dist[inside], 1e-12)[:, None]
        pos[inside] = OBSTACLE_CENTER + normal * limit
        radial = np.sum(vel[inside] * normal, axis=1)
        vel[inside] -= 2 * np.minimum(radial, 0.)[:, None] * normal


def clamp_actions(joint_action, n_agents):
    actions = np.array(joint_action, dtype=np.float64)
    if actions.shape != (n_agents, 2):
        raise ValueError(f'expected actions of shape ({n_agents}, 2), got '
                         f'{actions.shape}')
    if not np.all(np.isfinite(actions)):
        raise FloatingPointError('non-finite action')
    norms = np.linalg.norm(actions, axis=1)
    return actions / np.maximum(norms, 1.)[:, None]


def water_touches(state):
    '''Bool touch matrices pursuer x food and pursuer x poison.'''
    cfg = state.config
    food = cdist(state.positions, state.food) <= (cfg.pursuer_radius
                                                  + cfg.food_radius)
    poison = cdist(state.positions, state.poison) <= (cfg.pursuer_radius
                                                      + cfg.poison_radius)
    return food, poison


def water_rewards(state, actions):
    '''
    Per-agent rewards of the current positions and the (clamped) actions.

    Returns:
        (np.ndarray, np.ndarray, np.ndarray): rewards, captured food
        indices and touched poison indices.
    '''
    cfg = state.config
    food_touch, poison_touch = water_touches(state)
    rewards = -np.sum(actions**2, axis=1)
    rewards += cfg.r2_plus * food_touch.sum(axis=1)
    captured = np.flatnonzero(food_touch.sum(axis=0) >= cfg.coop_k)
    rewards += cfg.r1_plus * food_touch[:, captured].sum(axis=1)
    rewards -= cfg.r1_minus * poison_touch.sum(axis=1)
    touched_poison = np.flatnonzero(poison_touch.any(axis=0))
    return rewards, captured, touched_poison


def water_step(state, joint_action):
    cfg = state.config
    actions = clamp_actions(joint_action, cfg.n_pursuers)

    vel = state.velocities + cfg.max_accel * actions
    speed = np.linalg.norm(vel, axis=1)
    vel *= (cfg.max_speed / np.maximum(speed, cfg.max_speed))[:, None]
    state.velocities = vel
    state.positions = state.positions + vel
    _bounce(state.positions, state.velocities, cfg.pursuer_radius, cfg)

    state.food += state.food_vel
    _bounce(state.food, state.food_vel, cfg.food_radius, cfg)
    state.poison += state.poison_vel
    _bounce(state.poison, state.poison_vel, cfg.poison_radius, cfg)

    rewards, captured, touched_poison = water_rewards(state, actions)

    if len(captured):
        state.food[captured] = _free_positions(state.rng, len(captured),
                                               cfg.food_radius, cfg)
        state.food_vel[captured] = _random_velocities(
            state.rng, len(captured), cfg.target_speed)
    if len(touched_poison):
        state.poison[touched_poison] = _free_positions(
            state.rng, len(touched_poison), cfg.poison_radius, cfg)
        state.poison_vel[touched_poison] = _random_velocities(
            state.rng, len(touched_poison), cfg.target_speed)

    state.total_catches += len(captured)
    state.t += 1
    terminal = state.t >= cfg.horizon
    info = {'catches': len(captured), 'poison_hits': len(touched_poison)}
    return EnvStep(water_observe_all(state), rewards, bool(terminal), info)


def _ray_readings(rel_pos, rel_vel, radius, directions, cfg):
    '''Closeness and radial speed of the nearest entity along each ray.'''
    n_rays = len(directions)
    if len(rel_pos) == 0:
        return np.zeros(n_rays), np.zeros(n_rays)
    proj = rel_pos @ directions.T
    perp2 = np.sum(rel_pos**2, axis=1)[:, None] - proj**2
    hit = (proj >= 0.) & (proj <= cfg.sensor_range) & (perp2 <= radius**2)
    dist = np.where(hit, proj, np.inf)
    nearest = np.argmin(dist, axis=0)
    rays = np.arange(n_rays)
    found = np.isfinite(dist[nearest, rays])
    closeness = np.where(found, 1. - dist[nearest, rays] / cfg.sensor_range,
                         0.)
    speed = np.sum(rel_vel[nearest] * directions, axis=1) / cfg.max_speed
    return closeness, np.where(found, speed, 0.)


def _obstacle_readings(pos, directions, cfg):
    center = OBSTACLE_CENTER - pos
    tc = directions @ center
    d2 = center @ center - tc**2
    rr2 = cfg.obstacle_radius**2
    t_hit = tc - np.sqrt(np.maximum(rr2 - d2, 0.))
    found = (d2 <= rr2) & (t_hit >= 0.) & (t_hit <= cfg.sensor_range)
    return np.where(found, 1. - t_hit / cfg.sensor_range, 0.)


def water_observe(state, agent):
    '''
    Per sensor ray: closeness and radial speed of the nearest other pursuer,
    food and poison, then obstacle closeness (closeness is
    ``1 - distance / range``, 0 when nothing is sensed); followed by own
    position and own velocity in units of the speed cap.
    '''
    cfg = state.config
    directions = sensor_directions(cfg.n_sensors)
    pos = state.positions[agent]
    vel = state.velocities[agent]

    others = np.delete(np.arange(cfg.n_pursuers), agent)
    channels = []
    for targets, target_vel, radius in (
            (state.positions[others], state.velocities[others],
             cfg.pursuer_radius),
            (state.food, state.food_vel, cfg.food_radius),
            (state.poison, state.poison_vel, cfg.poison_radius)):
        channels.extend(_ray_readings(targets - pos, target_vel - vel, radius,
                                      directions, cfg))
    channels.append(_obstacle_readings(pos, directions, cfg))
    sensors = np.stack(channels, axis=1)
    return np.concatenate([sensors.reshape(-1), pos, vel / cfg.max_speed])


def water_observe_all(state):
    return [water_observe(state, ii) for ii in range(state.config.n_pursuers)]


class WaterworldEnv(MultiAgentEnv):

    discrete_actions = False

    def __init__(self, config=None, **kwargs):
        if config is None:
            config = WaterConfig(**kwargs)
        super().__init__(config)

    @property
    def n_agents(self):
        return self.config.n_pursuers

    @property
    def obs_dim(self):
        return self.config.obs_dim

    @property
    def action_dim(self):
        return 2

    def _reset(self, seed):
        return water_reset(self.config, seed)

    def _step(self, joint_action):
        return water_step(self.state, joint_action)

    def _observe(self, agent):
        return water_observe(self.state, agent)

    def agent_positions(self):
        return self.state.positions.copy()
