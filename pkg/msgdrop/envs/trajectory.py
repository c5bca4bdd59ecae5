# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import json
from pathlib import Path

import numpy as np


class TrajectoryRecorder:
    '''
    Line-delimited JSON dump of agent trajectories, one record per agent
    and step: ``episode, t, agent, x, y, action, reward``.
    '''

    def __init__(self, path):
        self.path = Path(path)
        self.path.parent.mkdir(parents=True, exist_ok=True)
        self._fh = open(self.path, 'w')

    def record(self, episode, t, env, actions, rewards):
        positions = env.agent_positions()
        for ii, (xx, yy) in enumerate(positions):
            action = np.asarray(actions[ii])
            self._fh.write(json.dumps({
                'episode': int(episode), 't': int(t), 'agent': ii,
                'x': float(xx), 'y': float(yy),
                'action': action.tolist(),
                'reward': float(rewards[ii])}) + '\n')

    def close(self):
        if not self._fh.closed:
            self._fh.close()

    def __enter__(self):
        return self

    def __exit__(self, *args):
        self.close()


def read_trajectory(path):
    with open(path) as fh:
        return [json.loads(line) for line in fh if line.strip()]
