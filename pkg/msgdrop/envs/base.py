# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from abc import ABC, abstractmethod
from dataclasses import dataclass, field

import numpy as np


@dataclass
class EnvStep:
    '''
    Joint result of one environment tick.

    Args:
        observations (list of np.ndarray): one observation per agent.
        rewards (np.ndarray): one reward per agent.
        terminal (bool): the episode is over and must be reset.
        info (dict): event counters of the tick (``catches`` at least).
    '''

    observations: list
    rewards: np.ndarray
    terminal: bool
    info: dict = field(default_factory=dict)


class MultiAgentEnv(ABC):
    '''
    Stepping interface shared by the games. Subclasses wrap a functional
    core (``*_reset``, ``*_step``, ``*_observe``) holding the full state,
    random generator included, in ``self.state``.
    '''

    discrete_actions = True

    def __init__(self, config):
        self.config = config
        self.state = None
        self._encoder = None
        self._message_dim = None

    @property
    @abstractmethod
    def n_agents(self):
        pass

    @property
    @abstractmethod
    def obs_dim(self):
        pass

    @abstractmethod
    def _reset(self, seed):
        pass

    @abstractmethod
    def _step(self, joint_action):
        pass

    @abstractmethod
    def _observe(self, agent):
        pass

    @abstractmethod
    def agent_positions(self):
        pass

    def reset(self, seed=None):
        self.state = self._reset(seed)
        return self.observe_all()

    def step(self, joint_action):
        if self.state is None:
            raise RuntimeError('step called before reset')
        return self._step(joint_action)

    def observe(self, agent):
        if not 0 <= agent < self.n_agents:
            raise ValueError(f'agent {agent} out of range')
        return self._observe(agent)

    def observe_all(self):
        return [self._observe(ii) for ii in range(self.n_agents)]

    # Messages

    def set_message_encoder(self, encoder):
        '''
        Switch to compressed messages: ``encoder(observation)`` becomes the
        message. ``None`` restores observation messages.
        '''
        self._encoder = encoder
        if encoder is None:
            self._message_dim = None
        else:
            self._message_dim = int(np.size(encoder(np.zeros(self.obs_dim))))

    @property
    def message_encoder(self):
        return self._encoder

    @property
    def message_dim(self):
        return self.obs_dim if self._message_dim is None else self._message_dim

    def message_of(self, agent, observation=None):
        if observation is None:
            observation = self.observe(agent)
        if self._encoder is None:
            return observation
        return np.asarray(self._encoder(observation), dtype=np.float64)

    def messages(self, observations):
        return [self.message_of(ii, oo) for ii, oo in enumerate(observations)]

    def messages_for(self, agent, messages, connected=None):
        return concat_messages(messages, agent, connected)


def concat_messages(messages, agent, connected=None):
    '''
    Messages received by ``agent``: the other agents' messages in index
    order, with a zero vector in place of every broken link.

    Args:
        messages (list of np.ndarray): one message per agent.
        agent (int): receiving agent.
        connected (np.ndarray): optional bool row, ``connected[j]`` is False
            when the link from agent ``j`` is broken.
    '''
    parts = []
    for jj, mm in enumerate(messages):
        if jj == agent:
            continue
        if connected is not None and not connected[jj]:
            parts.append(np.zeros_like(mm, dtype=np.float64))
        else:
            parts.append(np.asarray(mm, dtype=np.float64))
    if not parts:
        return np.zeros(0)
    return np.concatenate(parts)


def message_of(env, agent):
    return env.message_of(agent)
