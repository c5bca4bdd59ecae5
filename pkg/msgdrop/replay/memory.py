# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass

import numpy as np

FIELDS = ('o', 'm', 'a', 'r', 'o_next', 'm_next', 'terminal')


@dataclass
class Transition:
    o: np.ndarray
    m: np.ndarray
    a: object
    r: object
    o_next: np.ndarray
    m_next: np.ndarray
    terminal: bool


class TransitionBatch:
    '''
    Stacked transitions; behaves as a sequence of :class:`Transition`.
    '''

    def __init__(self, o, m, a, r, o_next, m_next, terminal):
        self.o = o
        self.m = m
        self.a = a
        self.r = r
        self.o_next = o_next
        self.m_next = m_next
        self.terminal = terminal

    def __len__(self):
        return len(self.terminal)

    def __getitem__(self, ii):
        return Transition(*(getattr(self, ff)[ii] for ff in FIELDS))

    def __iter__(self):
        for ii in range(len(self)):
            yield self[ii]


class ReplayMemory:
    '''
    Fixed-capacity FIFO store of transitions with uniform sampling with
    replacement.

    Args:
        capacity (int): maximum number of stored transitions.
        obs_shape (tuple or int): shape of ``o`` and ``o_next``.
        msg_dim (int): length of ``m`` and ``m_next`` (0 without messages).
        action_shape (tuple): shape of ``a``, ``()`` for discrete ids.
        action_dtype: dtype of the stored actions.
        reward_shape (tuple): shape of ``r``.
        dtype: storage dtype of observations and messages.
    '''

    def __init__(self, capacity, obs_shape, msg_dim=0, action_shape=(),
                 action_dtype=np.int64, reward_shape=(), dtype=np.float64):
        if int(capacity) <= 0:
            raise ValueError(f'capacity must be positive, got {capacity}')
        self.capacity = int(capacity)
        obs_shape = (obs_shape,) if np.isscalar(obs_shape) else tuple(obs_shape)
        self._shapes = {
            'o': obs_shape, 'o_next': obs_shape,
            'm': (int(msg_dim),), 'm_next': (int(msg_dim),),
            'a': tuple(action_shape), 'r': tuple(reward_shape),
            'terminal': (),
        }
        dtypes = {'o': dtype, 'o_next': dtype, 'm': dtype, 'm_next': dtype,
                  'a': action_dtype, 'r': np.float64, 'terminal': bool}
        self._data = {ff: np.zeros((self.capacity,) + self._shapes[ff],
                                   dtype=dtypes[ff]) for ff in FIELDS}
        self._next = 0
        self._size = 0

    def __len__(self):
        return self._size

    @property
    def nbytes(self):
        return sum(arr.nbytes for arr in self._data.values())

    def ready(self, batch_size, warmup_factor=10):
        return self._size >= warmup_factor * batch_size

    def push(self, transition):
        for ff in FIELDS:
            value = getattr(transition, ff)
            if np.shape(value) != self._shapes[ff]:
                raise ValueError(f'field {ff} of shape {np.shape(value)} does '
                                 f'not match {self._shapes[ff]}')
        if not np.all(np.isfinite(transition.r)):
            raise ValueError(f'non-finite reward {transition.r}')
        for ff in FIELDS:
            self._data[ff][self._next] = getattr(transition, ff)
        self._next = (self._next + 1) % self.capacity
        self._size = min(self._size + 1, self.capacity)

    def _gather(self, index):
        return TransitionBatch(*(self._data[ff][index].copy()
                                 for ff in FIELDS))

    def sample(self, batch_size, rng):
        if self._size == 0:
            raise ValueError('cannot sample from an empty replay memory')
        return self._gather(rng.integers(0, self._size, size=batch_size))

    def contents(self):
        '''All stored transitions, oldest first.'''
        start = self._next if self._size == self.capacity else 0
        index = (start + np.arange(self._size)) % self.capacity
        return self._gather(index)


def push(buffer, transition):
    buffer.push(transition)


def sample(buffer, batch_size, rng):
    return buffer.sample(batch_size, rng)
