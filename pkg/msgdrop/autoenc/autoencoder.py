# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from pathlib import Path

import numpy as np
from tqdm import tqdm

from ..envs import PursuitEnv
from ..nncore import AdamState, adam_step, chain_specs, mlp_init
from ..nncore import save_mlp, load_mlp

log = logging.getLogger(__name__)


class Autoencoder:
    '''
    Observation compressor: ``encoder`` maps an observation to a short
    code, ``decoder`` maps it back.

    Args:
        encoder (Mlp): ``obs_dim -> hidden -> code_dim``.
        decoder (Mlp): ``code_dim -> hidden -> obs_dim``.
    '''

    def __init__(self, encoder, decoder):
        if encoder.output_dim != decoder.input_dim or (
                decoder.output_dim != encoder.input_dim):
            raise ValueError('encoder and decoder shapes do not invert')
        self.encoder = encoder
        self.decoder = decoder

    @classmethod
    def build(cls, obs_dim=147, hidden=96, code_dim=32, seed=0):
        seeds = np.random.default_rng(seed).integers(2**31 - 1, size=2)
        encoder = mlp_init(chain_specs([obs_dim, hidden, code_dim],
                                       ['relu', 'linear']), seeds[0])
        decoder = mlp_init(chain_specs([code_dim, hidden, obs_dim],
                                       ['relu', 'linear']), seeds[1])
        return cls(encoder, decoder)

    @property
    def obs_dim(self):
        return self.encoder.input_dim

    @property
    def code_dim(self):
        return self.encoder.output_dim

    def encode(self, o):
        return self.encoder.forward(o)[0]

    __call__ = encode

    def reconstruct(self, o):
        return self.decoder.forward(self.encode(o))[0]

    def reconstruction_mse(self, samples):
        samples = np.atleast_2d(samples)
        return float(np.mean((self.reconstruct(samples) - samples)**2))

    def loss_and_grads(self, batch):
        code, enc_cache = self.encoder.forward(batch)
        recon, dec_cache = self.decoder.forward(code)
        diff = recon - batch
        loss = float(np.mean(diff**2))
        dec_grads, d_code = self.decoder.backward(dec_cache,
                                                  2. * diff / diff.size)
        enc_grads, _ = self.encoder.backward(enc_cache, d_code)
        return loss, enc_grads, dec_grads

    def save(self, directory):
        directory = Path(directory)
        save_mlp(self.encoder, directory / 'encoder.dnmd')
        save_mlp(self.decoder, directory / 'decoder.dnmd')
        return directory

    @classmethod
    def load(cls, directory):
        directory = Path(directory)
        return cls(load_mlp(directory / 'encoder.dnmd'),
                   load_mlp(directory / 'decoder.dnmd'))


def encode(ae, o):
    return ae.encode(o)


def pretrain(samples, epochs=10, lr=1e-3, batch_size=64, seed=0, ae=None,
             hidden=96, code_dim=32, progress=False):
    '''
    Minimize the mean squared reconstruction error of ``samples`` with Adam.

    Returns:
        (Autoencoder, list): the trained model and the average loss of each
        epoch (the last entry is the final loss).
    '''
    samples = np.asarray(samples, dtype=np.float64)
    if samples.ndim != 2 or len(samples) == 0:
        raise ValueError('samples must be a non-empty 2D array')
    rng = np.random.default_rng(seed)
    if ae is None:
        ae = Autoencoder.build(samples.shape[1], hidden, code_dim,
                               seed=int(rng.integers(2**31 - 1)))
    enc_state = AdamState(ae.encoder)
    dec_state = AdamState(ae.decoder)

    history = []
    for epoch in tqdm(range(epochs), desc='Pretraining autoencoder',
                      disable=not progress):
        order = rng.permutation(len(samples))
        losses = []
        for start in range(0, len(samples), batch_size):
            batch = samples[order[start:start + batch_size]]
            loss, enc_grads, dec_grads = ae.loss_and_grads(batch)
            adam_step(ae.encoder, enc_grads, enc_state, lr)
            adam_step(ae.decoder, dec_grads, dec_state, lr)
            losses.append(loss * len(batch))
        history.append(float(np.sum(losses) / len(samples)))
        log.debug(f'Autoencoder epoch {epoch}: loss {history[-1]:.6g}')
    return ae, history


def collect_pursuit_samples(config, n_samples, seed=0):
    '''Observations of every pursuer along uniformly random rollouts.'''
    rng = np.random.default_rng(seed)
    env = PursuitEnv(config)
    obs = env.reset(seed=int(rng.integers(2**31 - 1)))
    out = np.zeros((n_samples, env.obs_dim))
    filled = 0
    while filled < n_samples:
        for oo in obs[:n_samples - filled]:
            out[filled] = oo
            filled += 1
        step = env.step(rng.integers(env.n_actions, size=env.n_agents))
        obs = step.observations
        if step.terminal:
            obs = env.reset(seed=int(rng.integers(2**31 - 1)))
    return out
