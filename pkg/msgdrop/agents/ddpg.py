# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from pathlib import Path

import numpy as np

from ..general import read_key_values, write_key_values
from ..masking import BlockLayout, apply_mask, exec_scale, sample_block_masks
from ..nncore import Mlp, AdamState, adam_step, mlp_init
from ..nncore import chain_specs, save_mlp, load_mlp
from ..replay import ReplayMemory
from .architectures import CriticArchitecture
from .modes import AgentMode, Mode

log = logging.getLogger(__name__)

CRITIC_KINDS = ('central', 'independent', 'concat')


class Actor(Mlp):
    '''Deterministic policy ``o -> tanh(...)`` with one hidden relu layer.'''

    @classmethod
    def build(cls, obs_dim, seed, hidden=64, action_dim=2):
        net = mlp_init([(obs_dim, hidden, 'relu'),
                        (hidden, action_dim, 'tanh')], seed)
        return cls(net.weights, net.biases, net.activations)


class NoiseProcess:
    '''Gaussian exploration noise with standard deviation ``sigma``.'''

    def __init__(self, sigma=0.15):
        if sigma < 0:
            raise ValueError(f'noise sigma {sigma} must be non-negative')
        self.sigma = sigma

    def sample(self, rng, shape):
        return rng.normal(0., self.sigma, size=shape)


def act_ddpg(actor, o, sigma, rng):
    '''Actor output plus Gaussian noise, clamped to [-1, 1].'''
    mu = actor.forward(o)[0]
    noise = NoiseProcess(sigma).sample(rng, mu.shape)
    return np.clip(mu + noise, -1., 1.)


class Critic:
    '''
    Action-value network ``Q(x, a)`` of one agent.

    ``central``: f reads the own observation and action through two layers
    (the action enters both), g reads the other agents' observations and
    actions in one layer, h maps both features to a scalar.
    ``independent``: f and h only, over the own observation and action.
    ``concat``: one network over all observations and actions.

    Args:
        layout (BlockLayout): own observation block followed by the other
            agents' observation blocks.
        action_dim (int): action size of one agent.
        kind (str): one of ``'central'``, ``'independent'``, ``'concat'``.
        nets (dict): subnets, ``f1, f2, g, h`` or ``body``.
    '''

    def __init__(self, layout, action_dim, kind, nets):
        if kind not in CRITIC_KINDS:
            raise ValueError(f'critic kind {kind} not recognized')
        self.layout = layout
        self.action_dim = action_dim
        self.kind = kind
        self.nets = dict(nets)
        expected = {'central': {'f1', 'f2', 'g', 'h'},
                    'independent': {'f1', 'f2', 'h'},
                    'concat': {'body'}}[kind]
        if set(self.nets) != expected:
            raise ValueError(f'{kind} critic needs subnets {sorted(expected)}')
        out = self.nets['body' if kind == 'concat' else 'h'].output_dim
        assert out == 1, 'critic output must be scalar'

    @classmethod
    def build(cls, kind, layout, action_dim, seed, arch=CriticArchitecture()):
        seeds = np.random.default_rng(seed).integers(2**31 - 1, size=4)
        n_others = layout.n_message_blocks
        if kind == 'concat':
            n_in = layout.total_dim + action_dim * (1 + n_others)
            sizes = [n_in] + list(arch.concat_hidden) + [1]
            acts = ['relu'] * len(arch.concat_hidden) + ['linear']
            return cls(layout, action_dim, kind,
                       {'body': mlp_init(chain_specs(sizes, acts), seeds[0])})

        nets = {
            'f1': mlp_init([(layout.own_dim + action_dim, arch.f_hidden,
                             'relu')], seeds[0]),
            'f2': mlp_init([(arch.f_hidden + action_dim, arch.f_out,
                             'relu')], seeds[1]),
        }
        feat = arch.f_out
        if kind == 'central':
            nets['g'] = mlp_init([(layout.message_dim + action_dim * n_others,
                                   arch.g_out, 'relu')], seeds[2])
            feat += arch.g_out
        nets['h'] = mlp_init(chain_specs([feat, arch.h_hidden, 1],
                                         ['relu', 'linear']), seeds[3])
        return cls(layout, action_dim, kind, nets)

    def subnets(self):
        return self.nets

    def forward(self, x, a_own, a_others):
        '''
        Values of a batch.

        Args:
            x (np.ndarray): (batch, total_dim) processed observations.
            a_own (np.ndarray): (batch, action_dim).
            a_others (np.ndarray): (batch, n_others * action_dim).

        Returns:
            (np.ndarray, dict): values of shape (batch,) and the caches.
        '''
        xx = np.atleast_2d(np.asarray(x, dtype=np.float64))
        self.layout.check_input(xx)
        a_own = np.atleast_2d(a_own)
        a_others = np.asarray(a_others, dtype=np.float64).reshape(len(xx), -1)
        caches = {}

        if self.kind == 'concat':
            vv, caches['body'] = self.nets['body'].forward(
                np.concatenate([xx, a_own, a_others], axis=1))
            return vv[:, 0], caches

        own, others = self.layout.split(xx)
        h1, caches['f1'] = self.nets['f1'].forward(
            np.concatenate([own, a_own], axis=1))
        feat, caches['f2'] = self.nets['f2'].forward(
            np.concatenate([h1, a_own], axis=1))
        if self.kind == 'central':
            g_out, caches['g'] = self.nets['g'].forward(
                np.concatenate([others, a_others], axis=1))
            feat = np.concatenate([feat, g_out], axis=1)
        vv, caches['h'] = self.nets['h'].forward(feat)
        return vv[:, 0], caches

    def backward(self, caches, d_value):
        '''
        Returns:
            (dict, np.ndarray): subnet gradients and the gradient with
            respect to the own action, (batch, action_dim).
        '''
        dv = np.asarray(d_value, dtype=np.float64).reshape(-1, 1)
        na = self.action_dim
        grads = {}
        if self.kind == 'concat':
            grads['body'], d_in = self.nets['body'].backward(caches['body'],
                                                             dv)
            start = self.layout.total_dim
            return grads, d_in[:, start:start + na]

        grads['h'], d_feat = self.nets['h'].backward(caches['h'], dv)
        n_f = self.nets['f2'].output_dim
        grads['f2'], d_in2 = self.nets['f2'].backward(caches['f2'],
                                                      d_feat[:, :n_f])
        n_h1 = self.nets['f1'].output_dim
        grads['f1'], d_in1 = self.nets['f1'].backward(caches['f1'],
                                                      d_in2[:, :n_h1])
        d_action = d_in2[:, n_h1:] + d_in1[:, self.layout.own_dim:]
        if self.kind == 'central':
            grads['g'], _ = self.nets['g'].backward(caches['g'],
                                                    d_feat[:, n_f:])
        return grads, d_action

    def exec_value(self, x, a_own, a_others, p):
        '''Value with the other agents' observation blocks scaled by 1 - p.'''
        return self.forward(exec_scale(x, self.layout, p), a_own, a_others)[0]

    def copy(self):
        return Critic(self.layout, self.action_dim, self.kind,
                      {kk: vv.copy() for kk, vv in self.nets.items()})

    def copy_from(self, other):
        for name, net in self.nets.items():
            net.copy_from(other.nets[name])

    def equals(self, other):
        return self.nets.keys() == other.nets.keys() and all(
            net.equals(other.nets[name]) for name, net in self.nets.items())


def critic_value(critic, x, a_vec):
    '''
    Value for processed observations ``x`` and the joint action ``a_vec``
    ordered own action first, then the other agents in index order.
    '''
    xx = np.atleast_2d(x)
    aa = np.asarray(a_vec, dtype=np.float64).reshape(len(xx), -1)
    na = critic.action_dim
    values, _ = critic.forward(xx, aa[:, :na], aa[:, na:])
    return values if np.ndim(x) == 2 else float(values[0])


def policy_gradient(actor, o, d_q_d_a):
    '''
    Actor gradients of the loss ``-mean Q`` given ``dQ/da`` at
    ``a = actor(o)`` for a batch.
    '''
    _, cache = actor.forward(np.atleast_2d(o))
    d_a = -np.atleast_2d(d_q_d_a) / len(np.atleast_2d(o))
    grads, _ = actor.backward(cache, d_a)
    return grads


class DDPGLearner:
    '''
    MADDPG, MADDPG-MD, vanilla concat-critic MADDPG and independent DDPG
    for continuous actions, with optional parameter sharing across agents.

    Args:
        n_agents (int): number of agents.
        obs_dim (int): observation size of one agent.
        mode (AgentMode): ``DDPG``, ``MADDPG``, ``MADDPG_MD`` or
            ``MADDPG_CONCAT`` with its dropout rate.
        action_dim (int): action size of one agent.
        arch (CriticArchitecture): widths of actors and critics.
        share_params (bool): one actor and one critic for all agents.
        seed (int): seed of the network initialization.
        lr (float): Adam learning rate of actors and critics.
        gamma (float): discount factor.
        batch_size (int): minibatch size.
        buffer_size (int): capacity of the shared replay memory.
        target_sync (int): critic updates between hard target copies.
        mask_rng (np.random.Generator): stream of the dropout masks.
        memory_dtype: storage dtype of the replayed observations.
    '''

    def __init__(self, n_agents, obs_dim, mode, action_dim=2,
                 arch=CriticArchitecture(), share_params=True, seed=0,
                 lr=1e-3, gamma=0.95, batch_size=32, buffer_size=500_000,
                 target_sync=500, mask_rng=None, nets=None,
                 memory_dtype=np.float32):
        if not isinstance(mode, AgentMode) or mode.family != 'ddpg':
            raise ValueError(f'{mode!r} is not a DDPG mode')
        if n_agents < 2 and mode.kind != Mode.DDPG:
            raise ValueError('centralized critics need at least two agents')
        self.n_agents = n_agents
        self.obs_dim = obs_dim
        self.action_dim = action_dim
        self.mode = mode
        self.share_params = share_params
        self.lr = lr
        self.gamma = gamma
        self.batch_size = batch_size
        self.target_sync = target_sync
        self.mask_rng = (np.random.default_rng(seed) if mask_rng is None
                         else mask_rng)

        if mode.kind == Mode.DDPG:
            self.critic_kind = 'independent'
            self.layout = BlockLayout((0, obs_dim), [], obs_dim)
        else:
            self.critic_kind = 'concat' if mode.concat else 'central'
            self.layout = BlockLayout.from_dims(
                obs_dim, [obs_dim] * (n_agents - 1),
                agent_ids=list(range(1, n_agents)))

        n_sets = 1 if share_params else n_agents
        if nets is None:
            seeds = np.random.default_rng(seed).integers(2**31 - 1,
                                                         size=(n_sets, 2))
            actors = [Actor.build(obs_dim, int(ss[0]), arch.actor_hidden,
                                  action_dim) for ss in seeds]
            critics = [Critic.build(self.critic_kind, self.layout, action_dim,
                                    int(ss[1]), arch) for ss in seeds]
        else:
            actors = nets[0]
            critics = [Critic(self.layout, action_dim, self.critic_kind, nn)
                       for nn in nets[1]]
        if not len(actors) == len(critics) == n_sets:
            raise ValueError(f'expected {n_sets} parameter sets')
        self._install(actors, critics)

        self.memory = ReplayMemory(buffer_size, (n_agents, obs_dim), 0,
                                   action_shape=(n_agents, action_dim),
                                   action_dtype=np.float64,
                                   reward_shape=(n_agents,),
                                   dtype=memory_dtype)
        self.critic_updates = 0
        self.actor_updates = 0
        self.last_masks = None

    def _install(self, actors, critics):
        self.actor_sets = list(actors)
        self.critic_sets = list(critics)
        self.target_actor_sets = [aa.copy() for aa in self.actor_sets]
        self.target_critic_sets = [cc.copy() for cc in self.critic_sets]
        self.actor_optim = [AdamState(aa) for aa in self.actor_sets]
        self.critic_optim = [{name: AdamState(net)
                              for name, net in cc.subnets().items()}
                             for cc in self.critic_sets]

    def _set(self, agent):
        return 0 if self.share_params else agent

    @property
    def actors(self):
        return [self.actor_sets[self._set(ii)] for ii in range(self.n_agents)]

    @property
    def critics(self):
        return [self.critic_sets[self._set(ii)] for ii in range(self.n_agents)]

    def act(self, observations, sigma, rng):
        return np.stack([act_ddpg(self.actor_sets[self._set(ii)], oo, sigma,
                                  rng)
                         for ii, oo in enumerate(observations)])

    def critic_input(self, obs, agent):
        '''Own observation first, then the others in index order.'''
        obs = np.asarray(obs, dtype=np.float64)
        if self.critic_kind == 'independent':
            return obs[:, agent]
        others = [jj for jj in range(self.n_agents) if jj != agent]
        return np.concatenate([obs[:, agent],
                               obs[:, others].reshape(len(obs), -1)], axis=1)

    def split_actions(self, actions, agent):
        others = [jj for jj in range(self.n_agents) if jj != agent]
        if self.critic_kind == 'independent':
            others = []
        return (actions[:, agent],
                actions[:, others].reshape(len(actions), -1))

    def sample_masks(self, batch):
        if not self.mode.masked:
            return None
        return sample_block_masks(self.layout, self.mode.p, False,
                                  self.mask_rng, batch).multiplier(self.layout)

    def _masked(self, xx, masks):
        return xx if masks is None else apply_mask(xx, self.layout, masks)

    def shared_update(self, per_agent_grads, optims, sets):
        '''
        Sum the gradients of agents sharing one parameter set and apply one
        Adam step per set.
        '''
        totals = {}
        for agent, grads in enumerate(per_agent_grads):
            kk = self._set(agent)
            if kk not in totals:
                totals[kk] = grads
            elif isinstance(grads, dict):
                totals[kk] = {nn: totals[kk][nn] + gg
                              for nn, gg in grads.items()}
            else:
                totals[kk] = totals[kk] + grads
        for kk, grads in totals.items():
            if isinstance(grads, dict):
                for name, net in sets[kk].subnets().items():
                    adam_step(net, grads[name], optims[kk][name], self.lr)
            else:
                adam_step(sets[kk], grads, optims[kk], self.lr)

    def critic_targets(self, batch, agent, masks):
        obs_next = np.asarray(batch.o_next, dtype=np.float64)
        a_next = np.stack([self.target_actor_sets[self._set(jj)].forward(
            obs_next[:, jj])[0] for jj in range(self.n_agents)], axis=1)
        x_next = self._masked(self.critic_input(obs_next, agent), masks)
        own, others = self.split_actions(a_next, agent)
        q_next, _ = self.target_critic_sets[self._set(agent)].forward(
            x_next, own, others)
        rr = np.asarray(batch.r, dtype=np.float64)[:, agent]
        return np.where(np.asarray(batch.terminal, dtype=bool), rr,
                        rr + self.gamma * q_next)

    def critic_update(self, batch):
        '''
        One MSE step on the critics; every agent uses its own per-item mask
        for both current and next observations.
        '''
        obs = np.asarray(batch.o, dtype=np.float64)
        actions = np.asarray(batch.a, dtype=np.float64)
        losses = []
        per_agent = []
        self.last_masks = []
        for ii in range(self.n_agents):
            masks = self.sample_masks(len(batch))
            self.last_masks.append(masks)
            yy = self.critic_targets(batch, ii, masks)
            critic = self.critic_sets[self._set(ii)]
            own, others = self.split_actions(actions, ii)
            qq, caches = critic.forward(
                self._masked(self.critic_input(obs, ii), masks), own, others)
            diff = qq - yy
            losses.append(float(np.mean(diff**2)))
            grads, _ = critic.backward(caches, 2. * diff / len(diff))
            per_agent.append(grads)

        self.shared_update(per_agent, self.critic_optim, self.critic_sets)
        self.critic_updates += 1
        if self.target_sync and self.critic_updates % self.target_sync == 0:
            self.sync_targets()
        return float(np.mean(losses))

    def actor_update(self, batch):
        '''
        Ascend ``Q(x~, a)`` with respect to the own action at
        ``a_i = actor(o_i)``; other agents' actions come from the batch.
        '''
        obs = np.asarray(batch.o, dtype=np.float64)
        actions = np.asarray(batch.a, dtype=np.float64)
        per_agent = []
        for ii in range(self.n_agents):
            actor = self.actor_sets[self._set(ii)]
            critic = self.critic_sets[self._set(ii)]
            mu, _ = actor.forward(obs[:, ii])
            _, others = self.split_actions(actions, ii)
            xx = self._masked(self.critic_input(obs, ii),
                              self.sample_masks(len(batch)))
            _, caches = critic.forward(xx, mu, others)
            _, d_action = critic.backward(caches, np.ones(len(obs)))
            per_agent.append(policy_gradient(actor, obs[:, ii], d_action))
        self.shared_update(per_agent, self.actor_optim, self.actor_sets)
        self.actor_updates += 1

    def critic_train_step(self, rng):
        return self.critic_update(self.memory.sample(self.batch_size, rng))

    def actor_train_step(self, rng):
        self.actor_update(self.memory.sample(self.batch_size, rng))

    def sync_targets(self):
        for dst, src in zip(self.target_actor_sets, self.actor_sets):
            dst.copy_from(src)
        for dst, src in zip(self.target_critic_sets, self.critic_sets):
            dst.copy_from(src)

    # Checkpoints

    def save(self, directory):
        directory = Path(directory)
        for kk, (actor, critic) in enumerate(zip(self.actor_sets,
                                                 self.critic_sets)):
            save_mlp(actor, directory / f'actor_{kk}.dnmd')
            for name, net in critic.subnets().items():
                save_mlp(net, directory / f'critic_{kk}_{name}.dnmd')
        write_key_values({
            'mode': self.mode.label,
            'p': repr(self.mode.p),
            'n_agents': self.n_agents,
            'obs_dim': self.obs_dim,
            'action_dim': self.action_dim,
            'share_params': self.share_params,
            'critic_subnets': ','.join(self.critic_sets[0].subnets()),
            'critic_updates': self.critic_updates,
        }, directory / 'manifest.txt', header='DDPG learner checkpoint')
        log.debug(f'Saved DDPG learner to {directory}')
        return directory

    @classmethod
    def load(cls, directory, **kwargs):
        directory = Path(directory)
        manifest = read_key_values(directory / 'manifest.txt')
        mode = AgentMode(manifest['mode'], float(manifest['p']))
        n_agents = int(manifest['n_agents'])
        share = manifest['share_params'] == 'True'
        n_sets = 1 if share else n_agents
        actors = []
        critic_nets = []
        for kk in range(n_sets):
            net = load_mlp(directory / f'actor_{kk}.dnmd')
            actors.append(Actor(net.weights, net.biases, net.activations))
            critic_nets.append({
                name: load_mlp(directory / f'critic_{kk}_{name}.dnmd')
                for name in manifest['critic_subnets'].split(',')})
        learner = cls(n_agents, int(manifest['obs_dim']), mode,
                      action_dim=int(manifest['action_dim']),
                      share_params=share, nets=(actors, critic_nets),
                      **kwargs)
        learner.critic_updates = int(manifest['critic_updates'])
        return learner


def critic_train_step(batch, learner):
    '''One critic update on a sampled minibatch; returns the loss.'''
    return learner.critic_update(batch)


def actor_train_step(batch, learner):
    '''One actor update of ``learner`` on a sampled minibatch.'''
    learner.actor_update(batch)


def shared_update(learner, per_agent_grads, actors=True):
    '''Apply summed per-agent gradients to the actor or critic sets.'''
    if actors:
        learner.shared_update(per_agent_grads, learner.actor_optim,
                              learner.actor_sets)
    else:
        learner.shared_update(per_agent_grads, learner.critic_optim,
                              learner.critic_sets)
