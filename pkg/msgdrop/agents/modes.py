# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from dataclasses import dataclass
from enum import Enum


class Mode(Enum):
    FDC = 'FDC'
    DCC = 'DCC'
    DCC_MD = 'DCC_MD'
    SD = 'SD'
    FULL_MD = 'FULL_MD'
    FULL_SD = 'FULL_SD'
    CONCAT_MD = 'CONCAT_MD'
    DDPG = 'DDPG'
    MADDPG = 'MADDPG'
    MADDPG_MD = 'MADDPG_MD'
    MADDPG_CONCAT = 'MADDPG_CONCAT'


DQN_MODES = (Mode.FDC, Mode.DCC, Mode.DCC_MD, Mode.SD, Mode.FULL_MD,
             Mode.FULL_SD, Mode.CONCAT_MD)
DDPG_MODES = (Mode.DDPG, Mode.MADDPG, Mode.MADDPG_MD, Mode.MADDPG_CONCAT)

# p is forced to zero for these
_NO_DROPOUT = (Mode.FDC, Mode.DCC, Mode.DDPG, Mode.MADDPG, Mode.MADDPG_CONCAT)


@dataclass(frozen=True)
class AgentMode:
    '''
    Learner variant together with its dropout rate ``p``.

    ``DCC`` is ``DCC_MD`` at ``p = 0`` and ``MADDPG`` is ``MADDPG_MD`` at
    ``p = 0``; ``FDC`` and ``DDPG`` use no cross-agent inputs at all.
    '''

    kind: Mode
    p: float = 0.

    def __post_init__(self):
        if not isinstance(self.kind, Mode):
            object.__setattr__(self, 'kind', parse_mode(self.kind))
        if not 0. <= float(self.p) <= 1.:
            raise ValueError(f'dropout rate {self.p} outside [0, 1]')
        object.__setattr__(self, 'p', float(self.p))

    @property
    def family(self):
        return 'dqn' if self.kind in DQN_MODES else 'ddpg'

    @property
    def uses_messages(self):
        return self.kind not in (Mode.FDC, Mode.DDPG)

    @property
    def masked(self):
        return self.kind not in _NO_DROPOUT

    @property
    def rate(self):
        '''Dropout rate actually applied (0 for modes without dropout).'''
        return self.p if self.masked else 0.

    @property
    def element_wise(self):
        return self.kind in (Mode.SD, Mode.FULL_SD)

    @property
    def include_own(self):
        return self.kind in (Mode.FULL_MD, Mode.FULL_SD)

    @property
    def concat(self):
        return self.kind in (Mode.CONCAT_MD, Mode.MADDPG_CONCAT)

    @property
    def label(self):
        return self.kind.value


def parse_mode(name):
    key = str(name).strip().upper().replace('-', '_')
    try:
        return Mode(key)
    except ValueError:
        raise ValueError(f'mode {name} not recognized') from None
