# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import struct
from pathlib import Path

import numpy as np

from .mlp import Mlp

MAGIC = b'DNMD'
FORMAT_VERSION = 1

_HEADER = struct.Struct('<4sII')
_LAYER = struct.Struct('<IIB')
_ACTIVATION_CODES = {'relu': 0, 'linear': 1, 'tanh': 2}
_CODE_ACTIVATIONS = {vv: kk for kk, vv in _ACTIVATION_CODES.items()}


class CheckpointError(ValueError):
    pass


def mlp_to_bytes(net):
    '''
    Serialize ``net`` in the DNMD format: little-endian header
    (magic, version u32, layer count u32) followed, for each layer, by
    (in u32, out u32, activation u8), the row-major f64 weights and the f64
    biases.
    '''
    chunks = [_HEADER.pack(MAGIC, FORMAT_VERSION, net.n_layers)]
    for ww, bb, act in zip(net.weights, net.biases, net.activations):
        chunks.append(_LAYER.pack(ww.shape[1], ww.shape[0],
                                  _ACTIVATION_CODES[act]))
        chunks.append(np.ascontiguousarray(ww, dtype='<f8').tobytes())
        chunks.append(np.ascontiguousarray(bb, dtype='<f8').tobytes())
    return b''.join(chunks)


def mlp_from_bytes(data):
    if len(data) < _HEADER.size:
        raise CheckpointError('truncated checkpoint header')
    magic, version, n_layers = _HEADER.unpack_from(data, 0)
    if magic != MAGIC:
        raise CheckpointError(f'bad magic {magic!r}')
    if version != FORMAT_VERSION:
        raise CheckpointError(f'checkpoint version {version} not supported')

    offset = _HEADER.size
    weights, biases, activations = [], [], []
    for ii in range(n_layers):
        if len(data) < offset + _LAYER.size:
            raise CheckpointError(f'truncated header of layer {ii}')
        n_in, n_out, code = _LAYER.unpack_from(data, offset)
        offset += _LAYER.size
        if code not in _CODE_ACTIVATIONS:
            raise CheckpointError(f'unknown activation code {code}')
        n_bytes = 8 * (n_in * n_out + n_out)
        if len(data) < offset + n_bytes:
            raise CheckpointError(f'truncated parameters of layer {ii}')
        ww = np.frombuffer(data, dtype='<f8', count=n_in * n_out,
                           offset=offset).reshape(n_out, n_in)
        offset += 8 * n_in * n_out
        bb = np.frombuffer(data, dtype='<f8', count=n_out, offset=offset)
        offset += 8 * n_out
        weights.append(ww.astype(np.float64))
        biases.append(bb.astype(np.float64))
        activations.append(_CODE_ACTIVATIONS[code])

    if offset != len(data):
        raise CheckpointError(f'{len(data) - offset} trailing bytes')
    if n_layers == 0:
        raise CheckpointError('checkpoint holds no layers')
    return Mlp(weights, biases, activations)


def save_mlp(net, path):
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_bytes(mlp_to_bytes(net))
    return path


def load_mlp(path):
    return mlp_from_bytes(Path(path).read_bytes())
