# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import numpy as np

from ..nncore import mlp_init, chain_specs


class QNet:
    '''
    Composite Q-network ``h(f(o), g(m))`` over an input laid out by a
    :class:`BlockLayout`. The own-observation block feeds f, the message
    blocks feed g, and h maps the concatenated features to one value per
    action. Without g (FDC) h reads f alone; the concatenation variant
    replaces f, g and h with a single ``body`` network over the whole input.

    Args:
        layout (BlockLayout): partition of the input vector.
        f (Mlp): own-observation feature network.
        g (Mlp): message feature network, ``None`` without messages.
        h (Mlp): head producing the action values.
        body (Mlp): single network of the concatenation variant.
    '''

    def __init__(self, layout, f=None, g=None, h=None, body=None):
        self.layout = layout
        self.f = f
        self.g = g
        self.h = h
        self.body = body

        if body is not None:
            assert f is None and g is None and h is None
            if body.input_dim != layout.total_dim:
                raise ValueError(f'body input {body.input_dim} does not match '
                                 f'layout {layout.total_dim}')
            return

        if f.input_dim != layout.own_dim:
            raise ValueError(f'f input {f.input_dim} does not match own block '
                             f'{layout.own_dim}')
        feat = f.output_dim
        if g is not None:
            if g.input_dim != layout.message_dim:
                raise ValueError(f'g input {g.input_dim} does not match '
                                 f'message blocks {layout.message_dim}')
            feat += g.output_dim
        if h.input_dim != feat:
            raise ValueError(f'h input {h.input_dim} does not match feature '
                             f'width {feat}')

    @classmethod
    def build(cls, arch, layout, mode, seed):
        '''Fresh network for ``mode`` with widths from ``arch``.'''
        seeds = np.random.default_rng(seed).integers(2**31 - 1, size=3)
        head = list(arch.h_hidden) + [arch.n_actions]
        head_acts = ['relu'] * len(arch.h_hidden) + ['linear']

        if mode.concat:
            sizes = [layout.total_dim] + list(arch.f_sizes) + head
            acts = ['relu'] * len(arch.f_sizes) + head_acts
            return cls(layout, body=mlp_init(chain_specs(sizes, acts),
                                             seeds[0]))

        f = mlp_init(chain_specs([layout.own_dim] + list(arch.f_sizes),
                                 ['relu'] * len(arch.f_sizes)), seeds[0])
        g = None
        feat = arch.f_sizes[-1]
        if mode.uses_messages:
            if layout.message_dim == 0:
                raise ValueError(f'mode {mode.label} needs message blocks')
            g = mlp_init([(layout.message_dim, arch.g_size, 'relu')],
                         seeds[1])
            feat += arch.g_size
        h = mlp_init(chain_specs([feat] + head, head_acts), seeds[2])
        return cls(layout, f=f, g=g, h=h)

    @property
    def concat(self):
        return self.body is not None

    @property
    def n_actions(self):
        return (self.body if self.concat else self.h).output_dim

    def subnets(self):
        if self.concat:
            return {'body': self.body}
        nets = {'f': self.f}
        if self.g is not None:
            nets['g'] = self.g
        nets['h'] = self.h
        return nets

    def forward(self, x):
        '''
        Action values of the processed (masked or scaled) input.

        Args:
            x (np.ndarray): shape (total_dim,) or (batch, total_dim).

        Returns:
            (np.ndarray, dict): values shaped (n_actions,) or
            (batch, n_actions) and the per-subnet caches.
        '''
        xx = np.asarray(x, dtype=np.float64)
        single = xx.ndim == 1
        xx = np.atleast_2d(xx)
        self.layout.check_input(xx)

        if self.concat:
            qq, cache = self.body.forward(xx)
            caches = {'body': cache}
        else:
            own, msg = self.layout.split(xx)
            feat, f_cache = self.f.forward(own)
            caches = {'f': f_cache}
            if self.g is not None:
                g_out, caches['g'] = self.g.forward(msg)
                feat = np.concatenate([feat, g_out], axis=1)
            qq, caches['h'] = self.h.forward(feat)
        return (qq[0] if single else qq), caches

    def backward(self, caches, d_q):
        '''Gradients of every subnet, keyed as :meth:`subnets`.'''
        d_q = np.atleast_2d(np.asarray(d_q, dtype=np.float64))
        if self.concat:
            grads, _ = self.body.backward(caches['body'], d_q)
            return {'body': grads}

        out = {}
        out['h'], d_feat = self.h.backward(caches['h'], d_q)
        n_f = self.f.output_dim
        out['f'], _ = self.f.backward(caches['f'], d_feat[:, :n_f])
        if self.g is not None:
            out['g'], _ = self.g.backward(caches['g'], d_feat[:, n_f:])
        return out

    def copy(self):
        nets = {kk: vv.copy() for kk, vv in self.subnets().items()}
        return QNet(self.layout, **nets)

    def copy_from(self, other):
        for name, net in self.subnets().items():
            net.copy_from(other.subnets()[name])

    def equals(self, other):
        mine = self.subnets()
        theirs = other.subnets()
        return mine.keys() == theirs.keys() and all(
            mine[kk].equals(theirs[kk]) for kk in mine)


def q_values(net, o, m_processed):
    '''Action values of ``net`` for the own observation and processed
    messages (masked at training, scaled at execution).'''
    xx = np.concatenate([np.asarray(o, dtype=np.float64),
                         np.asarray(m_processed, dtype=np.float64)], axis=-1)
    return net.forward(xx)[0]
