# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging

import numpy as np
import pandas as pd

from ..agents import Actor, AgentMode, Critic, QNet, policy_gradient
from ..agents import CriticArchitecture, QArchitecture
from ..autoenc import Autoencoder
from ..masking import BlockLayout, apply_mask, sample_block_masks
from ..nncore import check_gradients, chain_specs, grad_check, mlp_init
from ..test_support import randomize_biases

log = logging.getLogger(__name__)

TOLERANCE = 1e-4
MARGIN = 1e-3

N_AGENTS = 3
OBS_DIM = 6
ACTION_DIM = 2
BATCH = 4

Q_ARCH = QArchitecture(f_sizes=(8, 6), g_size=5, h_hidden=(4,), n_actions=5)
CRITIC_ARCH = CriticArchitecture(f_hidden=8, f_out=6, g_out=5, h_hidden=4,
                                 concat_hidden=(8, 6), actor_hidden=7)


def _margin(caches):
    return min(cc.relu_margin() for cc in caches.values())


def _kink_free(draw, forward, rng, max_tries=1000):
    for _ in range(max_tries):
        sample = draw(rng)
        if _margin(forward(sample)) >= MARGIN:
            return sample
    raise RuntimeError(f'no kink-free input found in {max_tries} draws')


def _layout():
    return BlockLayout.for_agent(0, OBS_DIM, [OBS_DIM] * N_AGENTS)


def _check_qnet(mode_name, rng):
    mode = AgentMode(mode_name, 0.5)
    layout = (_layout() if mode.uses_messages
              else BlockLayout((0, OBS_DIM), [], OBS_DIM))
    net = QNet.build(Q_ARCH, layout, mode, int(rng.integers(2**31 - 1)))
    for sub in net.subnets().values():
        randomize_biases(sub, rng)
    masks = (sample_block_masks(layout, 0.5, mode.include_own, rng, BATCH)
             .multiplier(layout) if layout.n_message_blocks else None)

    def processed(gen):
        xx = gen.standard_normal((BATCH, layout.total_dim))
        return xx if masks is None else apply_mask(xx, layout, masks)

    xx = _kink_free(processed, lambda ss: net.forward(ss)[1], rng)
    actions = rng.integers(Q_ARCH.n_actions, size=BATCH)
    yy = rng.standard_normal(BATCH)
    idx = np.arange(BATCH)

    def loss():
        qq, _ = net.forward(xx)
        return float(np.mean((qq[idx, actions] - yy)**2))

    qq, caches = net.forward(xx)
    d_q = np.zeros_like(qq)
    d_q[idx, actions] = 2. * (qq[idx, actions] - yy) / BATCH
    grads = net.backward(caches, d_q)
    pairs = []
    for name, sub in net.subnets().items():
        pairs.extend(zip(sub.parameters(), grads[name].arrays()))
    return check_gradients(loss, pairs)


def _check_critic(kind, rng):
    layout = (BlockLayout((0, OBS_DIM), [], OBS_DIM)
              if kind == 'independent' else _layout())
    critic = Critic.build(kind, layout, ACTION_DIM,
                          int(rng.integers(2**31 - 1)), CRITIC_ARCH)
    for sub in critic.subnets().values():
        randomize_biases(sub, rng)
    n_others = 0 if kind == 'independent' else N_AGENTS - 1

    def draw(gen):
        return (gen.standard_normal((BATCH, layout.total_dim)),
                gen.uniform(-1, 1, (BATCH, ACTION_DIM)),
                gen.uniform(-1, 1, (BATCH, ACTION_DIM * n_others)))

    xx, a_own, a_others = _kink_free(
        draw, lambda ss: critic.forward(*ss)[1], rng)
    weights = rng.standard_normal(BATCH)

    def loss():
        vv, _ = critic.forward(xx, a_own, a_others)
        return float(np.sum(weights * vv))

    _, caches = critic.forward(xx, a_own, a_others)
    grads, d_action = critic.backward(caches, weights)
    pairs = [(a_own, d_action)]
    for name, sub in critic.subnets().items():
        pairs.extend(zip(sub.parameters(), grads[name].arrays()))
    return check_gradients(loss, pairs)


def _check_actor(rng):
    actor = Actor.build(OBS_DIM, int(rng.integers(2**31 - 1)),
                        CRITIC_ARCH.actor_hidden, ACTION_DIM)
    randomize_biases(actor, rng)
    xx = _kink_free(lambda gen: gen.standard_normal((BATCH, OBS_DIM)),
                    lambda ss: {'actor': actor.forward(ss)[1]}, rng)
    return grad_check(actor, xx, rng.standard_normal((BATCH, ACTION_DIM)))


def _check_policy_gradient(rng):
    layout = _layout()
    actor = Actor.build(OBS_DIM, int(rng.integers(2**31 - 1)),
                        CRITIC_ARCH.actor_hidden, ACTION_DIM)
    critic = Critic.build('central', layout, ACTION_DIM,
                          int(rng.integers(2**31 - 1)), CRITIC_ARCH)
    randomize_biases(actor, rng)
    for sub in critic.subnets().values():
        randomize_biases(sub, rng)
    a_others = rng.uniform(-1, 1, (BATCH, ACTION_DIM * (N_AGENTS - 1)))

    def forward(xx):
        mu, a_cache = actor.forward(xx[:, :OBS_DIM])
        caches = dict(critic.forward(xx, mu, a_others)[1])
        caches['actor'] = a_cache
        return caches

    xx = _kink_free(lambda gen: gen.standard_normal((BATCH, layout.total_dim)),
                    forward, rng)
    obs = xx[:, :OBS_DIM]

    def loss():
        mu, _ = actor.forward(obs)
        return -float(np.mean(critic.forward(xx, mu, a_others)[0]))

    mu, _ = actor.forward(obs)
    _, caches = critic.forward(xx, mu, a_others)
    _, d_action = critic.backward(caches, np.ones(BATCH))
    grads = policy_gradient(actor, obs, d_action)
    return check_gradients(loss, list(zip(actor.parameters(), grads.arrays())))


def _check_autoencoder(rng):
    ae = Autoencoder.build(obs_dim=10, hidden=7, code_dim=4,
                           seed=int(rng.integers(2**31 - 1)))
    randomize_biases(ae.encoder, rng)
    randomize_biases(ae.decoder, rng)

    def forward(xx):
        code, enc_cache = ae.encoder.forward(xx)
        return {'encoder': enc_cache, 'decoder': ae.decoder.forward(code)[1]}

    batch = _kink_free(lambda gen: gen.standard_normal((BATCH, 10)), forward,
                       rng)
    _, enc_grads, dec_grads = ae.loss_and_grads(batch)
    pairs = list(zip(ae.encoder.parameters(), enc_grads.arrays()))
    pairs += list(zip(ae.decoder.parameters(), dec_grads.arrays()))
    return check_gradients(lambda: ae.loss_and_grads(batch)[0], pairs)


def _check_mlp(activations, rng):
    sizes = [5] + [4] * len(activations)
    net = randomize_biases(mlp_init(chain_specs(sizes, activations),
                                    int(rng.integers(2**31 - 1))), rng)
    xx = _kink_free(lambda gen: gen.standard_normal((BATCH, 5)),
                    lambda ss: {'net': net.forward(ss)[1]}, rng)
    return grad_check(net, xx, rng.standard_normal((BATCH, 4)))


TOPOLOGIES = {
    'mlp_relu_tanh_linear': lambda rng: _check_mlp(['relu', 'tanh', 'linear'],
                                                   rng),
    'qnet_fdc': lambda rng: _check_qnet('FDC', rng),
    'qnet_dcc_md': lambda rng: _check_qnet('DCC_MD', rng),
    'qnet_full_md': lambda rng: _check_qnet('FULL_MD', rng),
    'qnet_concat_md': lambda rng: _check_qnet('CONCAT_MD', rng),
    'actor': _check_actor,
    'critic_central': lambda rng: _check_critic('central', rng),
    'critic_independent': lambda rng: _check_critic('independent', rng),
    'critic_concat': lambda rng: _check_critic('concat', rng),
    'policy_gradient': _check_policy_gradient,
    'autoencoder': _check_autoencoder,
}


def run_gradcheck_suite(seed=0, tolerance=TOLERANCE):
    '''
    Compare analytic and finite-difference gradients of every network
    topology used in the package.

    Returns:
        pandas.DataFrame: ``topology``, ``max_rel_error``, ``passed``.
    '''
    rows = []
    children = np.random.SeedSequence(seed).spawn(len(TOPOLOGIES))
    for (name, check), child in zip(TOPOLOGIES.items(), children):
        err = check(np.random.default_rng(child))
        rows.append({'topology': name, 'max_rel_error': err,
                     'passed': err < tolerance})
        log.info(f'gradcheck {name}: max relative error {err:.3e}')
    return pd.DataFrame(rows, columns=['topology', 'max_rel_error', 'passed'])
