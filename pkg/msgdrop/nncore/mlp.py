# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass

import numpy as np

ACTIVATIONS = ('relu', 'linear', 'tanh')


@dataclass(frozen=True)
class LayerSpec:
    '''
    Shape and activation of one dense layer.

    Args:
        input_dim (int): number of inputs of the layer.
        output_dim (int): number of outputs of the layer.
        activation (str): one of ``'relu'``, ``'linear'``, ``'tanh'``.
    '''

    input_dim: int
    output_dim: int
    activation: str = 'relu'

    def __post_init__(self):
        if int(self.input_dim) <= 0 or int(self.output_dim) <= 0:
            raise ValueError(f'layer dims must be positive, got '
                             f'({self.input_dim}, {self.output_dim})')
        if self.activation not in ACTIVATIONS:
            raise ValueError(f'activation {self.activation} not recognized')


def as_layer_spec(spec):
    if isinstance(spec, LayerSpec):
        return spec
    return LayerSpec(*spec)


def chain_specs(sizes, activations):
    '''
    Build the LayerSpec list of a chain ``sizes[0] -> ... -> sizes[-1]``.
    '''
    assert len(activations) == len(sizes) - 1, (
        'one activation per layer is needed')
    return [LayerSpec(n_in, n_out, act)
            for n_in, n_out, act in zip(sizes[:-1], sizes[1:], activations)]


def _activate(z, activation):
    if activation == 'relu':
        return np.maximum(z, 0.)
    if activation == 'tanh':
        return np.tanh(z)
    return z


def _activation_grad(z, out, activation):
    if activation == 'relu':
        return (z > 0.).astype(np.float64)
    if activation == 'tanh':
        return 1. - out**2
    return np.ones_like(z)


class ForwardCache:
    '''
    Per-layer ``(input, preactivation, output)`` triples of one forward pass.
    '''

    def __init__(self, layers, activations, single):
        self.layers = layers
        self.activations = activations
        self.single = single

    def relu_margin(self):
        '''Smallest |preactivation| over all relu units (inf if none).'''
        margins = [np.min(np.abs(zz)) for (_, zz, _), act
                   in zip(self.layers, self.activations) if act == 'relu']
        return float(min(margins)) if margins else np.inf


class Gradients:
    '''
    Gradients of a scalar loss with respect to the parameters of an Mlp.

    Args:
        weights (list of np.ndarray): one array per layer, shaped as the
            layer weight matrix (out x in).
        biases (list of np.ndarray): one array per layer.
    '''

    def __init__(self, weights, biases):
        assert len(weights) == len(biases)
        self.weights = list(weights)
        self.biases = list(biases)

    @classmethod
    def zeros_like(cls, net):
        return cls([np.zeros_like(ww) for ww in net.weights],
                   [np.zeros_like(bb) for bb in net.biases])

    def arrays(self):
        out = []
        for ww, bb in zip(self.weights, self.biases):
            out.extend([ww, bb])
        return out

    def _check_congruent(self, other):
        if len(self.weights) != len(other.weights) or any(
                aa.shape != bb.shape
                for aa, bb in zip(self.arrays(), other.arrays())):
            raise ValueError('gradients are not shape congruent')

    def __add__(self, other):
        self._check_congruent(other)
        return Gradients([aa + bb for aa, bb in zip(self.weights, other.weights)],
                         [aa + bb for aa, bb in zip(self.biases, other.biases)])

    def __iadd__(self, other):
        self._check_congruent(other)
        for aa, bb in zip(self.arrays(), other.arrays()):
            aa += bb
        return self

    def scale(self, factor):
        return Gradients([factor * ww for ww in self.weights],
                         [factor * bb for bb in self.biases])

    def is_finite(self):
        return all(np.all(np.isfinite(aa)) for aa in self.arrays())

    def is_zero(self):
        return all(not np.any(aa) for aa in self.arrays())

    def max_abs(self):
        return max(float(np.max(np.abs(aa))) for aa in self.arrays())


class Mlp:
    '''
    Stack of dense affine layers, each followed by its activation. Weights
    are stored as (out x in) matrices so that a layer computes
    ``act(W @ x + b)``; inputs can be a single vector or a batch of row
    vectors.

    Args:
        weights (list of np.ndarray): weight matrices, (out x in).
        biases (list of np.ndarray): bias vectors.
        activations (list of str): activation names, one per layer.
    '''

    def __init__(self, weights, biases, activations):
        if not (len(weights) == len(biases) == len(activations)):
            raise ValueError('weights, biases and activations must have the '
                             'same length')
        if len(weights) == 0:
            raise ValueError('an Mlp needs at least one layer')
        self.weights = [np.array(ww, dtype=np.float64) for ww in weights]
        self.biases = [np.array(bb, dtype=np.float64) for bb in biases]
        self.activations = [str(aa) for aa in activations]

        for ii, (ww, bb, aa) in enumerate(zip(
                self.weights, self.biases, self.activations)):
            if ww.ndim != 2 or bb.shape != (ww.shape[0],):
                raise ValueError(f'layer {ii}: weight {ww.shape} and bias '
                                 f'{bb.shape} do not match')
            if aa not in ACTIVATIONS:
                raise ValueError(f'activation {aa} not recognized')
            if ii > 0 and ww.shape[1] != self.weights[ii - 1].shape[0]:
                raise ValueError(f'layer {ii} input dim {ww.shape[1]} does '
                                 f'not chain with {self.weights[ii - 1].shape[0]}')
            if not (np.all(np.isfinite(ww)) and np.all(np.isfinite(bb))):
                raise FloatingPointError(f'layer {ii} has non-finite entries')

    @classmethod
    def from_specs(cls, specs, seed):
        return mlp_init(specs, seed)

    @property
    def input_dim(self):
        return self.weights[0].shape[1]

    @property
    def output_dim(self):
        return self.weights[-1].shape[0]

    @property
    def n_layers(self):
        return len(self.weights)

    @property
    def n_params(self):
        return sum(aa.size for aa in self.parameters())

    @property
    def specs(self):
        return [LayerSpec(ww.shape[1], ww.shape[0], aa)
                for ww, aa in zip(self.weights, self.activations)]

    def parameters(self):
        out = []
        for ww, bb in zip(self.weights, self.biases):
            out.extend([ww, bb])
        return out

    def copy(self):
        return type(self)(self.weights, self.biases, self.activations)

    def copy_from(self, other):
        if other.specs != self.specs:
            raise ValueError('cannot copy parameters between different '
                             'topologies')
        for dst, src in zip(self.parameters(), other.parameters()):
            np.copyto(dst, src)

    def equals(self, other):
        '''Bitwise parameter equality.'''
        return self.specs == other.specs and all(
            np.array_equal(aa, bb)
            for aa, bb in zip(self.parameters(), other.parameters()))

    def forward(self, x):
        '''
        Evaluate the network.

        Args:
            x (np.ndarray): input vector of length ``input_dim`` or batch of
                shape (batch, input_dim).

        Returns:
            (np.ndarray, ForwardCache): output with the batch shape of
            ``x`` and the cache needed by :meth:`backward`.
        '''
        xx = np.asarray(x, dtype=np.float64)
        single = xx.ndim == 1
        aa = np.atleast_2d(xx)
        if aa.ndim != 2 or aa.shape[1] != self.input_dim:
            raise ValueError(f'input of shape {xx.shape} does not match '
                             f'input dim {self.input_dim}')
        if not np.all(np.isfinite(aa)):
            raise FloatingPointError('non-finite input to forward')

        layers = []
        for ww, bb, act in zip(self.weights, self.biases, self.activations):
            zz = aa @ ww.T + bb
            out = _activate(zz, act)
            layers.append((aa, zz, out))
            aa = out

        return (aa[0] if single else aa), ForwardCache(
            layers, list(self.activations), single)

    def backward(self, cache, d_out):
        '''
        Backpropagate ``d_out`` (gradient of a scalar loss with respect to
        the output) through the layers recorded in ``cache``.

        Returns:
            (Gradients, np.ndarray): parameter gradients and the gradient
            with respect to the input, shaped like the forward input.
        '''
        if len(cache.layers) != self.n_layers:
            raise ValueError('stale cache: layer count mismatch')
        for (aa, zz, _), ww in zip(cache.layers, self.weights):
            if aa.shape[1] != ww.shape[1] or zz.shape[1] != ww.shape[0]:
                raise ValueError('stale cache: shape mismatch')

        dd = np.atleast_2d(np.asarray(d_out, dtype=np.float64))
        batch = cache.layers[-1][2].shape
        if dd.shape != batch:
            raise ValueError(f'output gradient of shape {dd.shape} does not '
                             f'match output {batch}')

        grad_w = [None] * self.n_layers
        grad_b = [None] * self.n_layers
        for ii in reversed(range(self.n_layers)):
            aa, zz, out = cache.layers[ii]
            dz = dd * _activation_grad(zz, out, self.activations[ii])
            grad_w[ii] = dz.T @ aa
            grad_b[ii] = dz.sum(axis=0)
            dd = dz @ self.weights[ii]

        return Gradients(grad_w, grad_b), (dd[0] if cache.single else dd)


def mlp_init(specs, seed):
    '''
    Create an Mlp with weights uniform in +-sqrt(6/(fan_in+fan_out)) and
    zero biases.

    Args:
        specs (list): LayerSpec objects or ``(in, out, activation)`` tuples.
        seed (int): seed of the initialization generator.

    Returns:
        Mlp: the initialized network.
    '''
    specs = [as_layer_spec(ss) for ss in specs]
    if len(specs) == 0:
        raise ValueError('at least one layer spec is needed')
    for prev, nxt in zip(specs[:-1], specs[1:]):
        if prev.output_dim != nxt.input_dim:
            raise ValueError(f'layer dims do not chain: {prev.output_dim} '
                             f'-> {nxt.input_dim}')

    rng = np.random.default_rng(seed)
    weights = []
    biases = []
    for ss in specs:
        limit = np.sqrt(6. / (ss.input_dim + ss.output_dim))
        weights.append(rng.uniform(-limit, limit,
                                   size=(ss.output_dim, ss.input_dim)))
        biases.append(np.zeros(ss.output_dim))
    return Mlp(weights, biases, [ss.activation for ss in specs])


def forward(net, x):
    return net.forward(x)


def backward(net, cache, d_out):
    return net.backward(cache, d_out)
