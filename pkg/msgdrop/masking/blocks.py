# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import itertools

import numpy as np


def _check_rate(p):
    if not 0. <= p <= 1.:
        raise ValueError(f'dropout rate {p} outside [0, 1]')


class BlockLayout:
    '''
    Partition of a flat input vector into the agent's own observation block
    and one block per received message.

    Args:
        own_block (tuple): ``(offset, length)`` of the own observation.
        message_blocks (list): ``(agent_id, offset, length)`` per message.
        total_dim (int): length of the input vector. Defaults to the extent
            of the blocks.
    '''

    def __init__(self, own_block, message_blocks, total_dim=None):
        self.own_block = (int(own_block[0]), int(own_block[1]))
        self.message_blocks = [(int(aa), int(oo), int(ll))
                               for aa, oo, ll in message_blocks]

        spans = [self.own_block] + [(oo, ll) for _, oo, ll
                                    in self.message_blocks]
        if total_dim is None:
            total_dim = sum(ll for _, ll in spans)
        self.total_dim = int(total_dim)

        if any(ll <= 0 for _, ll in spans):
            raise ValueError('block lengths must be positive')
        cursor = 0
        for oo, ll in sorted(spans):
            if oo != cursor:
                raise ValueError(f'blocks are not contiguous at offset {oo}')
            cursor = oo + ll
        if cursor != self.total_dim:
            raise ValueError(f'blocks cover {cursor} entries, expected '
                             f'{self.total_dim}')

        self._own_index = np.arange(self.own_block[0],
                                    self.own_block[0] + self.own_block[1])
        self._block_of_element = np.full(self.total_dim, -1, dtype=np.int64)
        for kk, (_, oo, ll) in enumerate(self.message_blocks):
            self._block_of_element[oo:oo + ll] = kk
        self._message_index = np.flatnonzero(self._block_of_element >= 0)

    @classmethod
    def from_dims(cls, own_dim, message_dims, agent_ids=None):
        '''Own block first, then the message blocks in the given order.'''
        if agent_ids is None:
            agent_ids = list(range(len(message_dims)))
        assert len(agent_ids) == len(message_dims)
        blocks = []
        offset = own_dim
        for aa, ll in zip(agent_ids, message_dims):
            blocks.append((aa, offset, ll))
            offset += ll
        return cls((0, own_dim), blocks, offset)

    @classmethod
    def for_agent(cls, agent, own_dim, message_dims):
        '''
        Layout of agent ``agent``: its own observation followed by the
        messages of every other agent in index order. ``message_dims`` has
        one entry per agent (the entry of ``agent`` is ignored).
        '''
        others = [jj for jj in range(len(message_dims)) if jj != agent]
        return cls.from_dims(own_dim, [message_dims[jj] for jj in others],
                             agent_ids=others)

    @property
    def n_message_blocks(self):
        return len(self.message_blocks)

    @property
    def own_dim(self):
        return self.own_block[1]

    @property
    def message_dim(self):
        return self.total_dim - self.own_dim

    @property
    def own_index(self):
        return self._own_index

    @property
    def message_index(self):
        return self._message_index

    def block_of_element(self):
        '''Message-block number of each element, ``-1`` on the own block.'''
        return self._block_of_element.copy()

    def split(self, x):
        xx = np.asarray(x)
        return xx[..., self._own_index], xx[..., self._message_index]

    def check_input(self, x):
        if np.shape(x)[-1] != self.total_dim:
            raise ValueError(f'input of length {np.shape(x)[-1]} does not '
                             f'match layout of length {self.total_dim}')


class BlockMask:
    '''
    Keep/drop decision per message block, optionally with a decision for
    the own block (full variants). Batched masks carry a leading batch
    axis.

    Args:
        keep (np.ndarray): bool, shape (n_blocks,) or (batch, n_blocks).
        own_keep (bool or np.ndarray): own-block decision, ``None`` when the
            own block is not subject to dropout.
    '''

    def __init__(self, keep, own_keep=None):
        self.keep = np.asarray(keep, dtype=bool)
        self.own_keep = None if own_keep is None else np.asarray(own_keep,
                                                                  dtype=bool)

    @property
    def batched(self):
        return self.keep.ndim == 2

    @property
    def includes_own(self):
        return self.own_keep is not None

    def flags(self):
        '''Own decision (if any) followed by the message decisions.'''
        if self.own_keep is None:
            return self.keep
        return np.concatenate([self.own_keep[..., None], self.keep], axis=-1)

    def key(self):
        return tuple(bool(bb) for bb in np.ravel(self.flags()))

    def multiplier(self, layout):
        '''Element-level bool keep array over the layout.'''
        if self.keep.shape[-1] != layout.n_message_blocks:
            raise ValueError(f'mask of {self.keep.shape[-1]} blocks does not '
                             f'match {layout.n_message_blocks} message blocks')
        lead = self.keep.shape[:-1]
        out = np.ones(lead + (layout.total_dim,), dtype=bool)
        blocks = layout.block_of_element()
        msg = blocks >= 0
        out[..., msg] = self.keep[..., blocks[msg]]
        if self.own_keep is not None:
            out[..., layout.own_index] = self.own_keep[..., None]
        return out


def sample_block_mask(layout, p, include_own=False, rng=None):
    '''
    Keep each message block (and the own block when ``include_own``)
    independently with probability ``1 - p``.
    '''
    _check_rate(p)
    keep = rng.random(layout.n_message_blocks) >= p
    own = bool(rng.random() >= p) if include_own else None
    return BlockMask(keep, own)


def sample_block_masks(layout, p, include_own, rng, batch):
    _check_rate(p)
    keep = rng.random((batch, layout.n_message_blocks)) >= p
    own = rng.random(batch) >= p if include_own else None
    return BlockMask(keep, own)


def sample_element_mask(layout, p, include_own=False, rng=None):
    '''Element-wise Bernoulli(1 - p) keeps, returned as a bool array.'''
    return sample_element_masks(layout, p, include_own, rng, batch=None)


def sample_element_masks(layout, p, include_own, rng, batch):
    _check_rate(p)
    lead = () if batch is None else (batch,)
    out = np.ones(lead + (layout.total_dim,), dtype=bool)
    out[..., layout.message_index] = (
        rng.random(lead + (layout.message_index.size,)) >= p)
    if include_own:
        out[..., layout.own_index] = (
            rng.random(lead + (layout.own_index.size,)) >= p)
    return out


def enumerate_block_masks(layout, include_own=False):
    n_flags = layout.n_message_blocks + int(include_own)
    masks = []
    for combo in itertools.product((True, False), repeat=n_flags):
        if include_own:
            masks.append(BlockMask(combo[1:], combo[0]))
        else:
            masks.append(BlockMask(combo))
    return masks


def apply_mask(x, layout, mask):
    '''
    Zero the dropped blocks (or elements) of ``x``; kept entries are
    returned unchanged, without any 1/(1-p) inflation.

    Args:
        x (np.ndarray): input of shape (total_dim,) or (batch, total_dim).
        layout (BlockLayout): partition of the input.
        mask (BlockMask or np.ndarray): block mask, or element-level keep
            array broadcastable to ``x``.
    '''
    xx = np.asarray(x, dtype=np.float64)
    layout.check_input(xx)
    if isinstance(mask, BlockMask):
        keep = mask.multiplier(layout)
    else:
        keep = np.asarray(mask).astype(bool)
    if keep.shape[-1] != layout.total_dim:
        raise ValueError(f'mask of length {keep.shape[-1]} does not match '
                         f'layout of length {layout.total_dim}')
    return np.where(keep, xx, 0.)


def exec_scale(x, layout, p, include_own=False):
    '''
    Scale the message entries of ``x`` by ``1 - p`` (the own block too when
    ``include_own``), the execution-time counterpart of :func:`apply_mask`.
    '''
    _check_rate(p)
    xx = np.asarray(x, dtype=np.float64)
    layout.check_input(xx)
    scale = np.ones(layout.total_dim)
    scale[layout.message_index] = 1. - p
    if include_own:
        scale[layout.own_index] = 1. - p
    return xx * scale
