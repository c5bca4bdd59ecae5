# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from pathlib import Path

from ..agents import DQNAgent, DDPGLearner
from ..autoenc import Autoencoder
from ..envs import make_env
from ..general import read_key_values, write_key_values
from ..nncore import CheckpointError
from .config import load_config
from .evaluation import dqn_policy, ddpg_policy, evaluate

log = logging.getLogger(__name__)

CHECKPOINT_MANIFEST = 'checkpoint.txt'


def save_checkpoint(directory, learners, step):
    '''
    Write a list of DQN agents or a DDPG learner under ``directory``.
    '''
    directory = Path(directory)
    if isinstance(learners, DDPGLearner):
        learners.save(directory / 'learner')
        kind, n_agents = 'ddpg', learners.n_agents
    else:
        for agent in learners:
            agent.save(directory / f'agent_{agent.agent_id}')
        kind, n_agents = 'dqn', len(learners)
    write_key_values({'kind': kind, 'n_agents': n_agents, 'step': step},
                     directory / CHECKPOINT_MANIFEST,
                     header='msgdrop checkpoint')
    log.debug(f'Wrote checkpoint of step {step} to {directory}')
    return directory


def load_checkpoint(directory):
    '''
    Returns:
        (str, object, int): ``dqn`` and the agent list or ``ddpg`` and the
        learner, plus the step the checkpoint was taken at.
    '''
    directory = Path(directory)
    manifest_path = directory / CHECKPOINT_MANIFEST
    if not manifest_path.exists():
        raise CheckpointError(f'{directory} holds no checkpoint')
    manifest = read_key_values(manifest_path)
    kind = manifest.get('kind')
    if kind == 'dqn':
        learners = [DQNAgent.load(directory / f'agent_{ii}')
                    for ii in range(int(manifest['n_agents']))]
    elif kind == 'ddpg':
        learners = DDPGLearner.load(directory / 'learner')
    else:
        raise CheckpointError(f'checkpoint kind {kind} not recognized')
    return kind, learners, int(manifest['step'])


def find_checkpoint(path):
    '''
    Accept a checkpoint directory or a run directory (its final
    checkpoint). Returns the checkpoint and run directories.
    '''
    path = Path(path)
    if (path / CHECKPOINT_MANIFEST).exists():
        run_dir = path.parent.parent
        if not (run_dir / 'config.txt').exists():
            run_dir = None
        return path, run_dir
    final = path / 'checkpoints' / 'final'
    if (final / CHECKPOINT_MANIFEST).exists():
        return final, path
    raise CheckpointError(f'no checkpoint found under {path}')


def build_run_env(cfg):
    env = make_env(cfg.env, **cfg.env_params)
    if cfg.agent.message_encoder:
        env.set_message_encoder(Autoencoder.load(cfg.agent.message_encoder))
    return env


def evaluate_checkpoint(path, episodes, link_failure=None, seed=0, eps=0.,
                        recorder=None):
    '''Evaluate the agents stored under a run or checkpoint directory.'''
    ckpt_dir, run_dir = find_checkpoint(path)
    if run_dir is None:
        raise CheckpointError(f'{ckpt_dir} is not inside a run directory')
    cfg = load_config(run_dir / 'config.txt')
    kind, learners, step = load_checkpoint(ckpt_dir)
    env = build_run_env(cfg)
    if kind != cfg.mode.family:
        raise CheckpointError(f'{kind} checkpoint does not match the '
                              f'{cfg.mode.label} run configuration')
    if kind == 'dqn':
        if len(learners) != env.n_agents:
            raise CheckpointError(f'checkpoint holds {len(learners)} agents, '
                                  f'environment has {env.n_agents}')
        for agent in learners:
            if agent.layout.own_dim != env.obs_dim:
                raise CheckpointError('checkpoint input size does not match '
                                      'the environment observation')
        policy = dqn_policy(learners, eps)
    else:
        if (learners.n_agents != env.n_agents
                or learners.obs_dim != env.obs_dim):
            raise CheckpointError('checkpoint does not match the environment')
        policy = ddpg_policy(learners)
    summary = evaluate(policy, env, episodes, link_failure, seed, recorder)
    summary.update(run_id=cfg.run_id, mode=cfg.mode.label, p=cfg.agent.p,
                   env=cfg.env, step=step)
    return summary
