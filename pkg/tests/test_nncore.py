# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import struct

import numpy as np
import pytest

import msgdrop as md
from msgdrop.nncore import (Gradients, chain_specs, check_gradients,
                            kink_free_input, mlp_from_bytes, mlp_to_bytes,
                            relative_error)
from msgdrop.test_support import loop_forward, randomize_biases


def _net(activations=('relu', 'tanh', 'linear'), sizes=(5, 7, 6, 3), seed=3):
    return md.mlp_init(chain_specs(list(sizes), list(activations)), seed)


def test_layer_spec_validation():
    with pytest.raises(ValueError):
        md.LayerSpec(0, 3, 'relu')
    with pytest.raises(ValueError):
        md.LayerSpec(3, 3, 'sigmoid')
    with pytest.raises(ValueError):
        md.mlp_init([(4, 3, 'relu'), (2, 1, 'linear')], 0)


def test_init_is_deterministic_and_bounded():
    net1 = _net(seed=11)
    net2 = _net(seed=11)
    assert net1.equals(net2)
    assert not net1.equals(_net(seed=12))
    for ww, bb in zip(net1.weights, net1.biases):
        limit = np.sqrt(6. / (ww.shape[0] + ww.shape[1]))
        assert np.all(np.abs(ww) <= limit)
        assert np.all(bb == 0.)
    assert net1.n_params == 5*7 + 7 + 7*6 + 6 + 6*3 + 3


@pytest.mark.parametrize('activations', [
    ('relu', 'relu', 'linear'),
    ('tanh', 'relu', 'tanh'),
    ('linear', 'linear', 'linear'),
])
def test_forward_matches_loop_oracle(activations):
    rng = np.random.default_rng(0)
    net = randomize_biases(_net(activations), rng)
    for _ in range(5):
        xx = rng.standard_normal(5)
        out, _ = net.forward(xx)
        assert out.shape == (3,)
        assert np.allclose(out, loop_forward(net, xx), atol=1e-12)


def test_batch_forward_matches_single_rows():
    rng = np.random.default_rng(1)
    net = randomize_biases(_net(), rng)
    xx = rng.standard_normal((4, 5))
    batch_out, _ = net.forward(xx)
    for row, out in zip(xx, batch_out):
        assert np.allclose(net.forward(row)[0], out)


def test_forward_rejects_bad_input():
    net = _net()
    with pytest.raises(ValueError):
        net.forward(np.zeros(4))
    with pytest.raises(FloatingPointError):
        net.forward(np.array([0., np.nan, 0., 0., 0.]))


def test_backward_rejects_stale_cache():
    net = _net()
    other = _net(sizes=(5, 4, 6, 3))
    _, cache = other.forward(np.ones(5))
    with pytest.raises(ValueError):
        net.backward(cache, np.ones(3))
    _, cache = net.forward(np.ones(5))
    with pytest.raises(ValueError):
        net.backward(cache, np.ones(2))


@pytest.mark.parametrize('batch', [None, 6])
def test_grad_check(batch):
    rng = np.random.default_rng(5)
    net = randomize_biases(_net(), rng)
    xx = kink_free_input(net, rng, batch=batch)
    d_out = rng.standard_normal(3 if batch is None else (batch, 3))
    assert md.grad_check(net, xx, d_out) < 1e-4


def test_input_gradient_shape():
    net = _net()
    out, cache = net.forward(np.ones(5))
    grads, d_in = net.backward(cache, np.ones_like(out))
    assert d_in.shape == (5,)
    assert [gg.shape for gg in grads.arrays()] == [
        pp.shape for pp in net.parameters()]


def test_relative_error_floor():
    assert relative_error(np.zeros(3), np.zeros(3)) == 0.
    assert np.isclose(relative_error([1e-6], [0.]), 1e-6 / 1e-4)
    assert np.isclose(relative_error([1.], [0.5]), 0.5 / 1.5)


def test_check_gradients_restores_parameters():
    rng = np.random.default_rng(2)
    net = randomize_biases(_net(), rng)
    before = net.copy()
    xx = kink_free_input(net, rng, batch=3)
    _, cache = net.forward(xx)
    grads, _ = net.backward(cache, np.ones((3, 3)))
    err = check_gradients(lambda: float(net.forward(xx)[0].sum()),
                          list(zip(net.parameters(), grads.arrays())))
    assert err < 1e-4
    assert net.equals(before)


def test_gradients_algebra():
    net = _net()
    zero = Gradients.zeros_like(net)
    assert zero.is_zero()
    _, cache = net.forward(np.ones(5))
    grads, _ = net.backward(cache, np.ones(3))
    total = zero + grads + grads
    for aa, bb in zip(total.arrays(), grads.arrays()):
        assert np.allclose(aa, 2 * bb)
    assert np.isclose(grads.scale(2.).max_abs(), 2 * grads.max_abs())
    with pytest.raises(ValueError):
        grads + Gradients.zeros_like(_net(sizes=(5, 4, 6, 3)))


def test_copy_is_independent():
    net = _net()
    clone = net.copy()
    clone.weights[0][0, 0] += 1.
    assert not net.equals(clone)
    net.copy_from(clone)
    assert net.equals(clone)


# Adam

def test_adam_first_step_is_sign_like():
    rng = np.random.default_rng(4)
    net = randomize_biases(_net(), rng)
    before = net.copy()
    _, cache = net.forward(rng.standard_normal((3, 5)))
    grads, _ = net.backward(cache, rng.standard_normal((3, 3)))
    state = md.AdamState(net)
    lr = 1e-3
    md.adam_step(net, grads, state, lr)
    assert state.t == 1
    for new, old, gg in zip(net.parameters(), before.parameters(),
                            grads.arrays()):
        assert np.allclose(new, old - lr * gg / (np.abs(gg) + 1e-8))


def test_adam_matches_reference_recursion():
    net = md.mlp_init([(2, 1, 'linear')], 0)
    state = md.AdamState(net)
    ww = net.weights[0].copy()
    mm = np.zeros_like(ww)
    vv = np.zeros_like(ww)
    lr, b1, b2 = 1e-2, 0.9, 0.999
    for tt in range(1, 6):
        gg = np.array([[0.3 * tt, -0.1]])
        grads = Gradients([gg], [np.zeros(1)])
        md.adam_step(net, grads, state, lr)
        mm = b1 * mm + (1 - b1) * gg
        vv = b2 * vv + (1 - b2) * gg**2
        ww = ww - lr * (mm / (1 - b1**tt)) / (np.sqrt(vv / (1 - b2**tt))
                                              + 1e-8)
        assert np.allclose(net.weights[0], ww)


def test_adam_zero_gradient_leaves_parameters():
    net = _net()
    before = net.copy()
    state = md.AdamState(net)
    md.adam_step(net, Gradients.zeros_like(net), state, 1e-3)
    assert net.equals(before)
    assert state.t == 1


def test_adam_rejects_bad_gradients():
    net = _net()
    state = md.AdamState(net)
    with pytest.raises(ValueError):
        md.adam_step(net, Gradients.zeros_like(_net(sizes=(5, 4, 6, 3))),
                     state, 1e-3)
    grads = Gradients.zeros_like(net)
    grads.weights[0][0, 0] = np.inf
    with pytest.raises(FloatingPointError):
        md.adam_step(net, grads, state, 1e-3)


# Checkpoints

def test_checkpoint_layout():
    net = _net()
    data = mlp_to_bytes(net)
    magic, version, n_layers = struct.unpack_from('<4sII', data, 0)
    assert (magic, version, n_layers) == (b'DNMD', 1, 3)
    assert struct.unpack_from('<IIB', data, 12) == (5, 7, 0)
    expected = 12 + sum(9 + 8 * (ww.size + bb.size)
                        for ww, bb in zip(net.weights, net.biases))
    assert len(data) == expected
    first = np.frombuffer(data, dtype='<f8', count=35, offset=21)
    assert np.array_equal(first.reshape(7, 5), net.weights[0])


def test_checkpoint_save_load(tmp_path):
    rng = np.random.default_rng(8)
    net = randomize_biases(_net(), rng)
    path = md.save_mlp(net, tmp_path / 'net.dnmd')
    loaded = md.load_mlp(path)
    assert loaded.equals(net)
    assert loaded.activations == net.activations
    assert mlp_to_bytes(loaded) == mlp_to_bytes(net)


@pytest.mark.parametrize('corrupt', ['magic', 'version', 'truncated',
                                     'trailing', 'activation'])
def test_checkpoint_errors(corrupt):
    data = bytearray(mlp_to_bytes(_net()))
    if corrupt == 'magic':
        data[:4] = b'XXXX'
    elif corrupt == 'version':
        data[4:8] = struct.pack('<I', 2)
    elif corrupt == 'truncated':
        data = data[:-3]
    elif corrupt == 'trailing':
        data += b'\x00'
    else:
        data[20] = 7
    with pytest.raises(md.CheckpointError):
        mlp_from_bytes(bytes(data))
