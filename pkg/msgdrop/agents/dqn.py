# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from pathlib import Path

import numpy as np

from ..general import read_key_values, write_key_values
from ..masking import BlockLayout, apply_mask, exec_scale
from ..masking import sample_block_masks, sample_element_masks
from ..nncore import AdamState, adam_step, save_mlp, load_mlp
from .modes import AgentMode
from .qnet import QNet

log = logging.getLogger(__name__)


class EpsilonSchedule:
    '''
    Linear exploration decay from ``start`` to ``end`` over
    ``anneal_steps`` steps, constant afterwards.
    '''

    def __init__(self, start=1., end=0.02, anneal_steps=2_000_000):
        if not (0. <= end <= 1. and 0. <= start <= 1.):
            raise ValueError(f'epsilon bounds ({start}, {end}) outside [0, 1]')
        if anneal_steps < 0:
            raise ValueError('anneal_steps must be non-negative')
        self.start = start
        self.end = end
        self.anneal_steps = anneal_steps

    def value(self, step):
        if step >= self.anneal_steps:
            return self.end
        frac = max(step, 0) / self.anneal_steps
        return self.start + frac * (self.end - self.start)

    __call__ = value


def _inputs(o, m):
    return np.concatenate([np.asarray(o, dtype=np.float64),
                           np.asarray(m, dtype=np.float64)], axis=-1)


def td_target(batch, net, target_net, p, gamma, masks=None,
              include_own=False):
    '''
    Double-DQN targets. The next action is the argmax of the online network
    on exec-scaled next inputs; it is evaluated by the target network on
    the next inputs masked with the same per-item masks as the current
    inputs. Terminal items get ``y = r``.
    '''
    layout = net.layout
    x_next = _inputs(batch.o_next, batch.m_next)
    x_exec = exec_scale(x_next, layout, p, include_own)
    a_star = np.argmax(net.forward(x_exec)[0], axis=1)

    x_tilde = x_next if masks is None else apply_mask(x_next, layout, masks)
    q_next = target_net.forward(x_tilde)[0][np.arange(len(a_star)), a_star]

    rr = np.asarray(batch.r, dtype=np.float64)
    terminal = np.asarray(batch.terminal, dtype=bool)
    return np.where(terminal, rr, rr + gamma * q_next)


class DQNAgent:
    '''
    DDQN learner over the ``h(f(o), g(m))`` architecture, covering FDC,
    DCC, DCC-MD and the dropout ablations (element-wise, full, concat).

    Args:
        agent_id (int): index of the agent.
        layout (BlockLayout): own block followed by the received message
            blocks (own block only for FDC).
        mode (AgentMode): learner variant and dropout rate.
        arch (QArchitecture): layer widths, ignored when ``qnet`` is given.
        seed (int): seed of the network initialization.
        lr (float): Adam learning rate.
        gamma (float): discount factor.
        batch_size (int): minibatch size.
        target_sync (int): training updates between hard target copies,
            0 disables the automatic copy.
        mask_rng (np.random.Generator): stream of the dropout masks.
        qnet (QNet): pre-built online network.
    '''

    def __init__(self, agent_id, layout, mode, arch=None, seed=0, lr=1e-4,
                 gamma=0.99, batch_size=32, target_sync=2000, mask_rng=None,
                 qnet=None):
        if not isinstance(mode, AgentMode):
            raise ValueError(f'expected an AgentMode, got {mode!r}')
        if mode.family != 'dqn':
            raise ValueError(f'mode {mode.label} is not a DQN mode')
        self.agent_id = agent_id
        self.mode = mode
        self.lr = lr
        self.gamma = gamma
        self.batch_size = batch_size
        self.target_sync = target_sync
        self.mask_rng = (np.random.default_rng(seed) if mask_rng is None
                         else mask_rng)

        if qnet is None:
            assert arch is not None, 'either arch or qnet is needed'
            qnet = QNet.build(arch, layout, mode, seed)
        self.online = qnet
        self.target = qnet.copy()
        self.optim = {name: AdamState(net)
                      for name, net in self.online.subnets().items()}
        self.updates = 0
        self.last_masks = None

    @classmethod
    def for_env(cls, agent_id, env, mode, arch, **kwargs):
        if mode.uses_messages:
            layout = BlockLayout.for_agent(agent_id, env.obs_dim,
                                           [env.message_dim] * env.n_agents)
        else:
            layout = BlockLayout((0, env.obs_dim), [], env.obs_dim)
        return cls(agent_id, layout, mode, arch, **kwargs)

    @property
    def layout(self):
        return self.online.layout

    @property
    def n_actions(self):
        return self.online.n_actions

    @property
    def message_dim(self):
        return self.layout.message_dim

    def exec_input(self, o, m):
        return exec_scale(_inputs(o, m), self.layout, self.mode.rate,
                          self.mode.include_own)

    def q_values(self, o, m):
        '''Execution-time action values (messages scaled by 1 - p).'''
        return self.online.forward(self.exec_input(o, m))[0]

    def act(self, o, m, eps, rng):
        '''
        Epsilon-greedy action; the greedy choice is the lowest index among
        the maximal execution-time values.
        '''
        if rng.random() < eps:
            return int(rng.integers(self.n_actions))
        return int(np.argmax(self.q_values(o, m)))

    def sample_masks(self, batch):
        '''Element-level keep arrays, one row per item (None if unmasked).'''
        if not self.mode.masked:
            return None
        if self.mode.element_wise:
            return sample_element_masks(self.layout, self.mode.p,
                                        self.mode.include_own, self.mask_rng,
                                        batch)
        return sample_block_masks(self.layout, self.mode.p,
                                  self.mode.include_own, self.mask_rng,
                                  batch).multiplier(self.layout)

    def td_target(self, batch, masks=None):
        return td_target(batch, self.online, self.target, self.mode.rate,
                         self.gamma, masks, self.mode.include_own)

    def loss_and_grads(self, x_tilde, actions, y):
        '''Mean squared TD error of the taken actions and its gradients.'''
        qq, caches = self.online.forward(np.atleast_2d(x_tilde))
        idx = np.arange(len(qq))
        diff = qq[idx, actions] - y
        d_q = np.zeros_like(qq)
        d_q[idx, actions] = 2. * diff / len(qq)
        return float(np.mean(diff**2)), self.online.backward(caches, d_q)

    def train_step(self, buffer, rng):
        batch = buffer.sample(self.batch_size, rng)
        xx = _inputs(batch.o, batch.m)
        masks = self.sample_masks(len(batch))
        self.last_masks = masks
        x_tilde = xx if masks is None else apply_mask(xx, self.layout, masks)

        yy = self.td_target(batch, masks)
        loss, grads = self.loss_and_grads(x_tilde, batch.a, yy)
        for name, net in self.online.subnets().items():
            adam_step(net, grads[name], self.optim[name], self.lr)

        self.updates += 1
        if self.target_sync and self.updates % self.target_sync == 0:
            self.sync_target()
        return loss

    def sync_target(self):
        self.target.copy_from(self.online)

    # Checkpoints

    def save(self, directory):
        directory = Path(directory)
        for name, net in self.online.subnets().items():
            save_mlp(net, directory / f'{name}.dnmd')
        layout = self.layout
        write_key_values({
            'agent_id': self.agent_id,
            'mode': self.mode.label,
            'p': repr(self.mode.p),
            'own_block': f'{layout.own_block[0]}:{layout.own_block[1]}',
            'message_blocks': ','.join(f'{aa}:{oo}:{ll}' for aa, oo, ll
                                       in layout.message_blocks),
            'subnets': ','.join(self.online.subnets()),
            'updates': self.updates,
        }, directory / 'manifest.txt', header='DQN agent checkpoint')
        log.debug(f'Saved agent {self.agent_id} to {directory}')
        return directory

    @classmethod
    def load(cls, directory, **kwargs):
        directory = Path(directory)
        manifest = read_key_values(directory / 'manifest.txt')
        own = [int(vv) for vv in manifest['own_block'].split(':')]
        blocks = [tuple(int(vv) for vv in item.split(':'))
                  for item in manifest['message_blocks'].split(',') if item]
        layout = BlockLayout(own, blocks)
        nets = {name: load_mlp(directory / f'{name}.dnmd')
                for name in manifest['subnets'].split(',')}
        mode = AgentMode(manifest['mode'], float(manifest['p']))
        agent = cls(int(manifest['agent_id']), layout, mode,
                    qnet=QNet(layout, **nets), **kwargs)
        agent.updates = int(manifest['updates'])
        return agent


def act(agent, o, m, eps, rng):
    return agent.act(o, m, eps, rng)


def train_step(agent, buffer, rng):
    return agent.train_step(buffer, rng)


def sync_target(agent):
    agent.sync_target()
