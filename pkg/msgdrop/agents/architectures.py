# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass


@dataclass(frozen=True)
class QArchitecture:
    '''
    Layer widths of the ``h(f(o), g(m))`` Q-network.

    Args:
        f_sizes (tuple): output widths of the layers of f.
        g_size (int): output width of the single layer of g.
        h_hidden (tuple): hidden widths of h.
        n_actions (int): number of discrete actions (outputs of h).
    '''

    f_sizes: tuple = (64, 48)
    g_size: int = 96
    h_hidden: tuple = (32,)
    n_actions: int = 5


def pursuit_architecture(n_agents, n_actions=5):
    # 96 units for 6 pursuers, 128 for 8
    return QArchitecture((64, 48), 16 * n_agents, (32,), n_actions)


def navigation_architecture(n_actions=5):
    return QArchitecture((64, 64), 64, (32,), n_actions)


def architecture_for(env_name, n_agents, n_actions=5):
    if env_name == 'pursuit':
        return pursuit_architecture(n_agents, n_actions)
    if env_name == 'navigation':
        return navigation_architecture(n_actions)
    raise ValueError(f'no Q-network architecture for environment {env_name}')


@dataclass(frozen=True)
class CriticArchitecture:
    '''
    Widths of the centralized critic: f is ``(o, a) -> f_hidden`` followed
    by ``(., a) -> f_out``, g a single layer to ``g_out`` and h
    ``h_hidden -> 1``.
    '''

    f_hidden: int = 200
    f_out: int = 100
    g_out: int = 100
    h_hidden: int = 64
    concat_hidden: tuple = (64, 64)
    actor_hidden: int = 64
