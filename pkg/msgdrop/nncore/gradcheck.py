# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import numpy as np

DELTA = 1e-5
SCALE_FLOOR = 1e-4


def numerical_gradient(loss_fn, array, delta=DELTA):
    '''
    Central finite differences of ``loss_fn()`` with respect to every entry
    of ``array``, which is perturbed in place and restored.
    '''
    grad = np.zeros_like(array)
    flat = array.reshape(-1)
    gflat = grad.reshape(-1)
    for ii in range(flat.size):
        orig = flat[ii]
        flat[ii] = orig + delta
        f_plus = loss_fn()
        flat[ii] = orig - delta
        f_minus = loss_fn()
        flat[ii] = orig
        gflat[ii] = (f_plus - f_minus) / (2. * delta)
    return grad


def relative_error(analytic, numeric, floor=SCALE_FLOOR):
    analytic = np.asarray(analytic, dtype=np.float64)
    numeric = np.asarray(numeric, dtype=np.float64)
    if analytic.size == 0:
        return 0.
    denom = np.maximum(np.abs(analytic) + np.abs(numeric), floor)
    return float(np.max(np.abs(analytic - numeric) / denom))


def check_gradients(loss_fn, pairs, delta=DELTA):
    '''
    Compare analytic gradients with central differences.

    Args:
        loss_fn (callable): returns the scalar loss for the current values of
            the arrays.
        pairs (list): ``(array, analytic_gradient)`` tuples; arrays are
            perturbed in place.

    Returns:
        float: worst relative error over all entries.
    '''
    worst = 0.
    for array, analytic in pairs:
        numeric = numerical_gradient(loss_fn, array, delta)
        worst = max(worst, relative_error(analytic, numeric))
    return worst


def grad_check(net, x, d_out, delta=DELTA):
    '''
    Check :meth:`Mlp.backward` on the loss ``sum(d_out * net(x))`` for every
    parameter and for the input.

    Returns:
        float: worst relative error.
    '''
    xx = np.array(x, dtype=np.float64)
    d_out = np.asarray(d_out, dtype=np.float64)

    def loss():
        out, _ = net.forward(xx)
        return float(np.sum(out * d_out))

    _, cache = net.forward(xx)
    grads, d_in = net.backward(cache, d_out)
    pairs = list(zip(net.parameters(), grads.arrays()))
    pairs.append((xx, d_in))
    return check_gradients(loss, pairs, delta)


def kink_free_input(net, rng, batch=None, margin=1e-3, max_tries=1000):
    '''
    Draw standard normal inputs whose relu preactivations all stay at least
    ``margin`` away from zero.
    '''
    shape = (net.input_dim,) if batch is None else (batch, net.input_dim)
    for _ in range(max_tries):
        xx = rng.standard_normal(shape)
        _, cache = net.forward(xx)
        if cache.relu_margin() >= margin:
            return xx
    raise RuntimeError(f'no kink-free input found in {max_tries} draws')
