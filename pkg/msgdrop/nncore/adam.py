# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import numpy as np


class AdamState:
    '''
    First and second moment accumulators of Adam for one Mlp.

    Args:
        net (Mlp): network whose parameter shapes the state mirrors.
        beta1 (float): decay of the first moment. Default ``0.9``.
        beta2 (float): decay of the second moment. Default ``0.999``.
        eps (float): denominator offset. Default ``1e-8``.
    '''

    def __init__(self, net, beta1=0.9, beta2=0.999, eps=1e-8):
        if not (0. <= beta1 < 1. and 0. <= beta2 < 1.):
            raise ValueError(f'invalid Adam betas ({beta1}, {beta2})')
        self.beta1 = beta1
        self.beta2 = beta2
        self.eps = eps
        self.t = 0
        self.first = [np.zeros_like(aa) for aa in net.parameters()]
        self.second = [np.zeros_like(aa) for aa in net.parameters()]


def adam_step(net, grads, state, lr):
    '''
    Apply one bias-corrected Adam update to ``net`` in place.

    An all-zero gradient still advances the step counter and decays the
    moments but leaves the parameters untouched.

    Returns:
        (Mlp, AdamState): the updated network and state.
    '''
    params = net.parameters()
    garrays = grads.arrays()
    if len(params) != len(garrays) or len(params) != len(state.first) or any(
            pp.shape != gg.shape for pp, gg in zip(params, garrays)):
        raise ValueError('gradients are not shape congruent with the network')
    if not grads.is_finite():
        raise FloatingPointError('non-finite gradients in adam_step')

    state.t += 1
    b1, b2 = state.beta1, state.beta2
    skip = grads.is_zero()
    corr1 = 1. - b1**state.t
    corr2 = 1. - b2**state.t
    for pp, gg, mm, vv in zip(params, garrays, state.first, state.second):
        mm *= b1
        mm += (1. - b1) * gg
        vv *= b2
        vv += (1. - b2) * gg * gg
        if skip:
            continue
        pp -= lr * (mm / corr1) / (np.sqrt(vv / corr2) + state.eps)

    return net, state
