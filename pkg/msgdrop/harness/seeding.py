# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import numpy as np

STREAM_NAMES = ('env', 'explore', 'minibatch', 'mask', 'init', 'eval')


class RunStreams:
    '''
    Independent random streams of one run, all spawned from the run seed.
    Spawning order is fixed, so every stream depends on the seed only:
    changing the dropout rate never perturbs the environment stream.

    Args:
        seed (int): run seed.
    '''

    def __init__(self, seed):
        self.seed = int(seed)
        root = np.random.SeedSequence(self.seed)
        self._sequences = dict(zip(STREAM_NAMES,
                                   root.spawn(len(STREAM_NAMES))))
        self._generators = {name: np.random.default_rng(seq)
                            for name, seq in self._sequences.items()}

    def __getitem__(self, name):
        if name not in self._generators:
            raise ValueError(f'stream {name} not recognized')
        return self._generators[name]

    @property
    def env(self):
        return self['env']

    @property
    def explore(self):
        return self['explore']

    @property
    def minibatch(self):
        return self['minibatch']

    @property
    def eval(self):
        return self['eval']

    def draw_seed(self, name):
        return int(self[name].integers(2**31 - 1))

    def spawn(self, name, n):
        '''
        ``n`` child generators of stream ``name`` (e.g. one mask stream per
        agent). Every call returns fresh children.
        '''
        if name not in self._sequences:
            raise ValueError(f'stream {name} not recognized')
        return [np.random.default_rng(seq)
                for seq in self._sequences[name].spawn(n)]
