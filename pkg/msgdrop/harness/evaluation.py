# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from itertools import combinations

import numpy as np

from .metrics import mean_and_std

log = logging.getLogger(__name__)


class LinkFailure:
    '''
    Communication failures applied at execution time. Broken links are
    symmetric: both directions of a pair fail together.

    Args:
        kind (str): ``none``, ``half`` (a random half of the agent pairs,
            fixed for the whole evaluation), ``all`` or ``prob`` (every pair
            fails independently with probability ``q`` at every step).
        q (float): failure probability of ``prob``.
    '''

    KINDS = ('none', 'half', 'all', 'prob')

    def __init__(self, kind='none', q=0.):
        if kind not in self.KINDS:
            raise ValueError(f'link failure {kind} not recognized')
        if not 0. <= q <= 1.:
            raise ValueError(f'link failure probability {q} outside [0, 1]')
        self.kind = kind
        self.q = float(q)

    @classmethod
    def parse(cls, text):
        '''``none``, ``half``, ``all`` or ``prob:q``.'''
        text = str(text).strip()
        if text.startswith('prob:'):
            try:
                q = float(text[len('prob:'):])
            except ValueError:
                raise ValueError(f'link failure {text} not recognized') \
                    from None
            return cls('prob', q)
        return cls(text)

    def __str__(self):
        return f'prob:{self.q:g}' if self.kind == 'prob' else self.kind

    def __repr__(self):
        return f'LinkFailure({str(self)!r})'

    def connectivity(self, n_agents, rng):
        '''
        Endless generator of per-step connectivity matrices;
        ``conn[i, j]`` is False when agent i does not receive agent j.
        '''
        base = np.ones((n_agents, n_agents), dtype=bool)
        if self.kind == 'all':
            base[:] = False
        elif self.kind == 'half':
            pairs = list(combinations(range(n_agents), 2))
            chosen = rng.choice(len(pairs), len(pairs) // 2, replace=False)
            for kk in chosen:
                ii, jj = pairs[kk]
                base[ii, jj] = base[jj, ii] = False
        np.fill_diagonal(base, True)
        while True:
            if self.kind != 'prob':
                yield base
                continue
            broken = np.triu(rng.random((n_agents, n_agents)) < self.q, 1)
            yield ~(broken | broken.T)


def dqn_policy(agents, eps=0.):
    '''Execution policy of DQN agents: epsilon-greedy on scaled messages.'''
    def policy(observations, received, rng):
        return [agent.act(oo, mm if agent.mode.uses_messages else np.zeros(0),
                          eps, rng)
                for agent, oo, mm in zip(agents, observations, received)]
    return policy


def ddpg_policy(learner, sigma=0.):
    '''Deterministic actor outputs (plus optional exploration noise).'''
    def policy(observations, received, rng):
        return learner.act(observations, sigma, rng)
    return policy


def random_policy(env):
    def policy(observations, received, rng):
        if env.discrete_actions:
            return [int(aa) for aa in rng.integers(env.n_actions,
                                                   size=env.n_agents)]
        return rng.uniform(-1., 1., size=(env.n_agents, env.action_dim))
    return policy


def evaluate(policy, env, episodes, link_failure=None, seed=0,
             recorder=None):
    '''
    Run ``episodes`` full episodes of ``policy`` without any learning.

    Messages of broken links are replaced by zero vectors before the
    receiving agent scales them. Episode seeds, link failures and action
    noise come from separate streams, so a policy that ignores messages
    sees identical episodes under every link failure.

    Args:
        policy (callable): ``policy(observations, received, rng)`` returning
            the joint action.
        env (MultiAgentEnv): environment, reset at every episode.
        episodes (int): number of episodes.
        link_failure (LinkFailure or str): communication failures.
        seed (int): evaluation seed.
        recorder (TrajectoryRecorder): optional trajectory dump.

    Returns:
        dict: ``episodes``, ``mean_catches``, ``std_catches``,
        ``mean_return``, ``std_return`` plus the per-episode lists
        ``catches`` and ``returns``.
    '''
    if episodes <= 0:
        raise ValueError(f'episodes must be positive, got {episodes}')
    if link_failure is None:
        link_failure = LinkFailure()
    elif isinstance(link_failure, str):
        link_failure = LinkFailure.parse(link_failure)

    episode_seq, link_seq, act_seq = np.random.SeedSequence(seed).spawn(3)
    episode_rng = np.random.default_rng(episode_seq)
    act_rng = np.random.default_rng(act_seq)
    links = link_failure.connectivity(env.n_agents,
                                      np.random.default_rng(link_seq))

    catches = []
    returns = []
    for episode in range(episodes):
        observations = env.reset(seed=int(episode_rng.integers(2**31 - 1)))
        total_catches = 0
        total_return = 0.
        tt = 0
        while True:
            conn = next(links)
            messages = env.messages(observations)
            received = [env.messages_for(ii, messages, conn[ii])
                        for ii in range(env.n_agents)]
            actions = policy(observations, received, act_rng)
            step = env.step(actions)
            if recorder is not None:
                recorder.record(episode, tt, env, actions, step.rewards)
            total_catches += step.info.get('catches', 0)
            total_return += float(np.sum(step.rewards))
            observations = step.observations
            tt += 1
            if step.terminal:
                break
        catches.append(total_catches)
        returns.append(total_return)

    mean_c, std_c = mean_and_std(catches)
    mean_r, std_r = mean_and_std(returns)
    log.debug(f'Evaluated {episodes} episodes under {link_failure}: '
              f'catches {mean_c:.3f} +- {std_c:.3f}')
    return {'episodes': episodes, 'mean_catches': mean_c,
            'std_catches': std_c, 'mean_return': mean_r,
            'std_return': std_r, 'catches': catches, 'returns': returns}


def random_policy_baseline(env, episodes, seed=0):
    return evaluate(random_policy(env), env, episodes, seed=seed)
