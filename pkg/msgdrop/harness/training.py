# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
import time
from pathlib import Path

import numpy as np
from tqdm import tqdm

from ..agents import DQNAgent, DDPGLearner, EpsilonSchedule
from ..agents import actor_train_step, critic_train_step
from ..agents import architecture_for
from ..envs import TrajectoryRecorder
from ..replay import ReplayMemory, Transition
from .checkpoints import build_run_env, save_checkpoint
from .config import write_config
from .evaluation import dqn_policy, ddpg_policy, evaluate
from .metrics import METRIC_COLUMNS, emit_metrics, metrics_frame
from .seeding import RunStreams

log = logging.getLogger(__name__)


class MetricsSink:
    '''
    Collects evaluation rows of one run and appends each one to its CSV as
    soon as it is produced.
    '''

    def __init__(self, cfg, path):
        self.cfg = cfg
        self.path = Path(path)
        self.rows = []
        self._start = time.perf_counter()
        if self.path.exists():
            self.path.unlink()
        emit_metrics([], self.path)

    def emit(self, step, episodes_done, summary, losses, eps):
        cfg = self.cfg
        wallclock = (time.perf_counter() - self._start
                     if cfg.train.record_wallclock else float('nan'))
        row = {
            'run_id': cfg.run_id,
            'seed': cfg.train.seed,
            'mode': cfg.mode.label,
            'p': cfg.agent.p,
            'env': cfg.env,
            'step': step,
            'episodes_done': episodes_done,
            'mean_return': summary['mean_return'],
            'catches': summary['mean_catches'],
            'loss': float(np.mean(losses)) if losses else float('nan'),
            'eps': float(eps),
            'wallclock_s': wallclock,
        }
        self.rows.append(row)
        emit_metrics([row], self.path)
        log.info(f'{cfg.run_id} step {step}: catches '
                 f'{summary["mean_catches"]:.3f} +- '
                 f'{summary["std_catches"]:.3f}, return '
                 f'{summary["mean_return"]:.3f}')

    def frame(self):
        return metrics_frame(self.rows)


def _due(step, every, total):
    done = step + 1
    return done % every == 0 or done == total


def _storage_dtype(cfg):
    # Pursuit observations are binary occupancy flags
    if cfg.env == 'pursuit' and not cfg.agent.message_encoder:
        return np.uint8
    return np.float64


def _received(env, observations, agents):
    if not any(agent.mode.uses_messages for agent in agents):
        return [np.zeros(0)] * len(agents)
    messages = env.messages(observations)
    return [env.messages_for(ii, messages) if agent.mode.uses_messages
            else np.zeros(0) for ii, agent in enumerate(agents)]


def build_dqn_agents(cfg, env, streams):
    mode = cfg.mode
    arch = architecture_for(cfg.env, env.n_agents, env.n_actions)
    mask_rngs = streams.spawn('mask', env.n_agents)
    ag = cfg.agent
    return [DQNAgent.for_env(ii, env, mode, arch,
                             seed=streams.draw_seed('init'), lr=ag.lr,
                             gamma=ag.gamma, batch_size=ag.batch_size,
                             target_sync=ag.target_sync,
                             mask_rng=mask_rngs[ii])
            for ii in range(env.n_agents)]


def build_ddpg_learner(cfg, env, streams):
    ag = cfg.agent
    return DDPGLearner(env.n_agents, env.obs_dim, cfg.mode,
                       action_dim=env.action_dim,
                       share_params=ag.share_params,
                       seed=streams.draw_seed('init'), lr=ag.lr,
                       gamma=ag.gamma, batch_size=ag.batch_size,
                       buffer_size=ag.buffer_size,
                       target_sync=ag.target_sync,
                       mask_rng=streams.spawn('mask', 1)[0])


def _train_dqn(cfg, run_dir, streams, sink):
    ag, tr = cfg.agent, cfg.train
    env = build_run_env(cfg)
    eval_env = build_run_env(cfg)
    agents = build_dqn_agents(cfg, env, streams)
    memories = [ReplayMemory(ag.buffer_size, env.obs_dim, agent.message_dim,
                             dtype=_storage_dtype(cfg)) for agent in agents]
    schedule = EpsilonSchedule(ag.eps_start, ag.eps_end, ag.eps_anneal)
    policy = dqn_policy(agents, tr.eval_eps)

    observations = env.reset(seed=streams.draw_seed('env'))
    received = _received(env, observations, agents)
    losses = []
    episodes = 0
    eps = schedule(0)
    for step in tqdm(range(tr.total_steps), desc=f'Training {cfg.run_id}',
                     disable=not tr.progress):
        eps = schedule(step)
        actions = [agent.act(oo, mm, eps, streams.explore)
                   for agent, oo, mm in zip(agents, observations, received)]
        result = env.step(actions)
        next_received = _received(env, result.observations, agents)
        for ii, memory in enumerate(memories):
            memory.push(Transition(observations[ii], received[ii],
                                   actions[ii], result.rewards[ii],
                                   result.observations[ii], next_received[ii],
                                   result.terminal))

        if (step + 1) % ag.train_every == 0:
            for agent, memory in zip(agents, memories):
                if memory.ready(ag.batch_size, ag.warmup_factor):
                    losses.append(agent.train_step(memory,
                                                   streams.minibatch))

        if result.terminal:
            episodes += 1
            observations = env.reset(seed=streams.draw_seed('env'))
            received = _received(env, observations, agents)
        else:
            observations = result.observations
            received = next_received

        if _due(step, tr.eval_every, tr.total_steps):
            summary = evaluate(policy, eval_env, tr.eval_episodes,
                               seed=streams.draw_seed('eval'))
            sink.emit(step + 1, episodes, summary, losses, eps)
            losses = []
        if tr.checkpoint_every and (step + 1) % tr.checkpoint_every == 0:
            save_checkpoint(run_dir / 'checkpoints' / f'step_{step + 1}',
                            agents, step + 1)

    if tr.total_steps and not any(
            memory.ready(ag.batch_size, ag.warmup_factor)
            for memory in memories):
        log.warning(f'{cfg.run_id}: replay warmup never met, no training '
                    f'update was made')
    save_checkpoint(run_dir / 'checkpoints' / 'final', agents,
                    tr.total_steps)
    return agents


def _train_ddpg(cfg, run_dir, streams, sink):
    ag, tr = cfg.agent, cfg.train
    env = build_run_env(cfg)
    eval_env = build_run_env(cfg)
    learner = build_ddpg_learner(cfg, env, streams)
    memory = learner.memory
    policy = ddpg_policy(learner)
    no_messages = np.zeros(0)

    observations = env.reset(seed=streams.draw_seed('env'))
    losses = []
    episodes = 0
    for step in tqdm(range(tr.total_steps), desc=f'Training {cfg.run_id}',
                     disable=not tr.progress):
        actions = learner.act(observations, ag.noise_sigma, streams.explore)
        result = env.step(actions)
        memory.push(Transition(np.stack(observations), no_messages, actions,
                               np.asarray(result.rewards, dtype=np.float64),
                               np.stack(result.observations), no_messages,
                               result.terminal))

        if memory.ready(ag.batch_size, ag.warmup_factor):
            if (step + 1) % ag.critic_every == 0:
                losses.append(critic_train_step(
                    memory.sample(ag.batch_size, streams.minibatch), learner))
            if (step + 1) % ag.actor_every == 0:
                actor_train_step(
                    memory.sample(ag.batch_size, streams.minibatch), learner)

        if result.terminal:
            episodes += 1
            observations = env.reset(seed=streams.draw_seed('env'))
        else:
            observations = result.observations

        if _due(step, tr.eval_every, tr.total_steps):
            summary = evaluate(policy, eval_env, tr.eval_episodes,
                               seed=streams.draw_seed('eval'))
            sink.emit(step + 1, episodes, summary, losses, ag.noise_sigma)
            losses = []
        if tr.checkpoint_every and (step + 1) % tr.checkpoint_every == 0:
            save_checkpoint(run_dir / 'checkpoints' / f'step_{step + 1}',
                            learner, step + 1)

    if tr.total_steps and not memory.ready(ag.batch_size, ag.warmup_factor):
        log.warning(f'{cfg.run_id}: replay warmup never met, no training '
                    f'update was made')
    save_checkpoint(run_dir / 'checkpoints' / 'final', learner,
                    tr.total_steps)
    return learner


def run_training(cfg, run_dir=None):
    '''
    Train the agents of ``cfg`` and evaluate them periodically.

    Writes ``config.txt``, ``metrics.csv`` (one row per evaluation) and
    ``checkpoints/`` (``step_<n>`` every ``train.checkpoint_every`` steps
    plus ``final``) under the run directory, by default
    ``<train.out_dir>/<run_id>``. Repeating a run with the same
    configuration reproduces ``metrics.csv`` byte for byte as long as
    ``train.record_wallclock`` is off.

    Returns:
        pandas.DataFrame: the metrics rows.
    '''
    cfg.validate()
    run_dir = Path(run_dir) if run_dir is not None else (
        Path(cfg.train.out_dir) / cfg.run_id)
    run_dir.mkdir(parents=True, exist_ok=True)
    write_config(cfg, run_dir / 'config.txt')
    log.info(f'Starting run {cfg.run_id}: env {cfg.env}, mode '
             f'{cfg.mode.label}, p {cfg.agent.p:g}, seed {cfg.train.seed}')

    sink = MetricsSink(cfg, run_dir / 'metrics.csv')
    streams = RunStreams(cfg.train.seed)
    if cfg.mode.family == 'dqn':
        learners = _train_dqn(cfg, run_dir, streams, sink)
    else:
        learners = _train_ddpg(cfg, run_dir, streams, sink)

    if cfg.train.trajectory_dump:
        env = build_run_env(cfg)
        policy = (dqn_policy(learners, cfg.train.eval_eps)
                  if cfg.mode.family == 'dqn' else ddpg_policy(learners))
        with TrajectoryRecorder(cfg.train.trajectory_dump) as recorder:
            evaluate(policy, env, 1, seed=streams.draw_seed('eval'),
                     recorder=recorder)

    frame = sink.frame()
    assert list(frame.columns) == list(METRIC_COLUMNS)
    return frame
