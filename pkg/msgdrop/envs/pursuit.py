# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass

import numpy as np

from .base import EnvStep, MultiAgentEnv

NORTH, EAST, WEST, SOUTH, STAY = range(5)
ACTION_NAMES = ('north', 'east', 'west', 'south', 'stay')
MOVES = np.array([[0, 1], [1, 0], [-1, 0], [0, -1], [0, 0]], dtype=np.int64)
NEIGHBOURS = MOVES[:4]

EMPTY = -1


@dataclass
class PursuitConfig:
    '''
    Pursuit gridworld settings.

    Args:
        n_pursuers (int): number of learning pursuers N.
        n_evaders (int): number of random evaders M.
        sensing_range (int): half-width D of the observation window.
        width (int): map width.
        height (int): map height.
        r_plus (float): reward of each capturing pursuer.
        r1_minus (float): per-step penalty of every pursuer.
        r2_minus (float): penalty for moving into the map boundary.
        horizon (int): episode length T.
    '''

    n_pursuers: int = 6
    n_evaders: int = 2
    sensing_range: int = 3
    width: int = 15
    height: int = 15
    r_plus: float = 5.
    r1_minus: float = 0.05
    r2_minus: float = 0.5
    horizon: int = 500

    def __post_init__(self):
        for name in ('n_pursuers', 'n_evaders', 'sensing_range', 'width',
                     'height', 'horizon'):
            if int(getattr(self, name)) <= 0:
                raise ValueError(f'{name} must be positive, got '
                                 f'{getattr(self, name)}')
        for name in ('r_plus', 'r1_minus', 'r2_minus'):
            if getattr(self, name) < 0:
                raise ValueError(f'{name} must be non-negative')
        if self.width * self.height < self.n_pursuers + self.n_evaders:
            raise ValueError(f'a {self.width}x{self.height} map cannot host '
                             f'{self.n_pursuers + self.n_evaders} entities')

    @property
    def window(self):
        return 2 * self.sensing_range + 1

    @property
    def obs_dim(self):
        return 3 * self.window**2


class PursuitState:
    '''
    Positions are integer ``(x, y)`` rows; ``grid[x, y]`` holds the index of
    the pursuer occupying a cell, ``n_pursuers + k`` for evader ``k`` and
    ``-1`` for empty cells.
    '''

    def __init__(self, config, pursuers, evaders, rng):
        self.config = config
        self.pursuers = np.array(pursuers, dtype=np.int64).reshape(-1, 2)
        self.evaders = np.array(evaders, dtype=np.int64).reshape(-1, 2)
        self.rng = rng
        self.t = 0
        self.total_catches = 0
        self.grid = np.full((config.width, config.height), EMPTY,
                            dtype=np.int64)
        self.rebuild_grid()

    def rebuild_grid(self):
        self.grid[:] = EMPTY
        n_p = len(self.pursuers)
        for ii, (xx, yy) in enumerate(self.pursuers):
            assert self.grid[xx, yy] == EMPTY, 'two entities share a cell'
            self.grid[xx, yy] = ii
        for kk, (xx, yy) in enumerate(self.evaders):
            assert self.grid[xx, yy] == EMPTY, 'two entities share a cell'
            self.grid[xx, yy] = n_p + kk

    def inside(self, cell):
        return (0 <= cell[0] < self.config.width
                and 0 <= cell[1] < self.config.height)


def center_cells(width, height, count):
    '''
    The ``count`` cells nearest the exact map center, ties broken by row
    then column.
    '''
    cx = (width - 1) / 2.
    cy = (height - 1) / 2.
    cells = [(xx, yy) for yy in range(height) for xx in range(width)]
    cells.sort(key=lambda cc: ((cc[0] - cx)**2 + (cc[1] - cy)**2,
                               cc[1], cc[0]))
    return cells[:count]


def pursuit_reset(cfg, seed=None):
    '''
    Evaders on the center cells, pursuers on distinct random free cells.
    '''
    if cfg.width * cfg.height < cfg.n_pursuers + cfg.n_evaders:
        raise ValueError(f'a {cfg.width}x{cfg.height} map cannot host '
                         f'{cfg.n_pursuers + cfg.n_evaders} entities')
    rng = np.random.default_rng(seed)
    evaders = center_cells(cfg.width, cfg.height, cfg.n_evaders)
    taken = set(evaders)
    free = [(xx, yy) for xx in range(cfg.width) for yy in range(cfg.height)
            if (xx, yy) not in taken]
    chosen = rng.choice(len(free), size=cfg.n_pursuers, replace=False)
    pursuers = [free[ii] for ii in chosen]
    return PursuitState(cfg, pursuers, evaders, rng)


def _check_actions(state, joint_action):
    actions = np.asarray(joint_action)
    if actions.shape != (len(state.pursuers),):
        raise ValueError(f'expected {len(state.pursuers)} actions, got '
                         f'shape {actions.shape}')
    out = []
    for aa in actions:
        if not float(aa).is_integer() or not 0 <= int(aa) < len(MOVES):
            raise ValueError(f'action {aa} not recognized')
        out.append(int(aa))
    return out


def _move_evaders(state):
    n_p = len(state.pursuers)
    for kk in range(len(state.evaders)):
        move = MOVES[state.rng.integers(len(MOVES))]
        old = state.evaders[kk]
        new = old + move
        if state.inside(new) and state.grid[new[0], new[1]] == EMPTY:
            state.grid[old[0], old[1]] = EMPTY
            state.grid[new[0], new[1]] = n_p + kk
            state.evaders[kk] = new


def _move_pursuers(state, actions):
    '''Sequential moves in a random order; returns the boundary hitters.'''
    hits = np.zeros(len(state.pursuers), dtype=bool)
    for ii in state.rng.permutation(len(state.pursuers)):
        if actions[ii] == STAY:
            continue
        old = state.pursuers[ii]
        new = old + MOVES[actions[ii]]
        if not state.inside(new):
            hits[ii] = True
            continue
        if state.grid[new[0], new[1]] != EMPTY:
            continue
        state.grid[old[0], old[1]] = EMPTY
        state.grid[new[0], new[1]] = ii
        state.pursuers[ii] = new
    return hits


def pursuit_captures(state):
    '''
    Evaders whose four sides are each a pursuer or the map boundary.

    Returns:
        (list, np.ndarray): captured evader indices and, per pursuer, the
        number of captured evaders it is adjacent to.
    '''
    n_p = len(state.pursuers)
    captured = []
    counts = np.zeros(n_p, dtype=np.int64)
    for kk, cell in enumerate(state.evaders):
        capturers = []
        surrounded = True
        for move in NEIGHBOURS:
            nb = cell + move
            if not state.inside(nb):
                continue
            who = state.grid[nb[0], nb[1]]
            if 0 <= who < n_p:
                capturers.append(who)
            else:
                surrounded = False
                break
        if surrounded:
            captured.append(kk)
            counts[capturers] += 1
    return captured, counts


def pursuit_step(state, joint_action):
    actions = _check_actions(state, joint_action)
    cfg = state.config

    _move_evaders(state)
    hits = _move_pursuers(state, actions)
    captured, counts = pursuit_captures(state)

    rewards = (-cfg.r1_minus - cfg.r2_minus * hits
               + cfg.r_plus * counts).astype(np.float64)

    if captured:
        state.evaders = np.delete(state.evaders, captured, axis=0)
        state.rebuild_grid()
    state.total_catches += len(captured)
    state.t += 1

    terminal = len(state.evaders) == 0 or state.t >= cfg.horizon
    info = {'catches': len(captured),
            'capture_incidences': int(counts.sum()),
            'boundary_hits': int(hits.sum())}
    observations = pursuit_observe_all(state)
    return EnvStep(observations, rewards, bool(terminal), info)


def padded_channels(state):
    '''
    Pursuer, evader and boundary channels of the whole map, padded by the
    sensing range with boundary cells.
    '''
    cfg = state.config
    dd = cfg.sensing_range
    chan = np.zeros((3, cfg.width + 2 * dd, cfg.height + 2 * dd))
    chan[2] = 1.
    chan[2, dd:dd + cfg.width, dd:dd + cfg.height] = 0.
    for xx, yy in state.pursuers:
        chan[0, xx + dd, yy + dd] = 1.
    for xx, yy in state.evaders:
        chan[1, xx + dd, yy + dd] = 1.
    return chan


def pursuit_observe(state, agent, channels=None):
    '''
    Flattened ``3 x (2D+1) x (2D+1)`` window centred on the pursuer; entry
    ``[c, i, j]`` describes cell ``(x - D + i, y - D + j)``.
    '''
    if channels is None:
        channels = padded_channels(state)
    size = state.config.window
    xx, yy = state.pursuers[agent]
    window = channels[:, xx:xx + size, yy:yy + size].copy()
    window[0, size // 2, size // 2] = 0.
    return window.reshape(-1)


def pursuit_observe_all(state):
    channels = padded_channels(state)
    return [pursuit_observe(state, ii, channels)
            for ii in range(len(state.pursuers))]


class PursuitEnv(MultiAgentEnv):

    def __init__(self, config=None, **kwargs):
        if config is None:
            config = PursuitConfig(**kwargs)
        super().__init__(config)

    @property
    def n_agents(self):
        return self.config.n_pursuers

    @property
    def obs_dim(self):
        return self.config.obs_dim

    @property
    def n_actions(self):
        return len(MOVES)

    def _reset(self, seed):
        return pursuit_reset(self.config, seed)

    def _step(self, joint_action):
        return pursuit_step(self.state, joint_action)

    def _observe(self, agent):
        return pursuit_observe(self.state, agent)

    def observe_all(self):
        return pursuit_observe_all(self.state)

    def agent_positions(self):
        return self.state.pursuers.astype(np.float64)
