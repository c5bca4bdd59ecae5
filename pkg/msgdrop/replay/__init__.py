# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .memory import Transition, TransitionBatch, ReplayMemory, push, sample
