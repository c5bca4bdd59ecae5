# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .oracles import randomize_biases, loop_forward, random_pursuit_state
from .oracles import pursuit_observation_scan, pursuit_capture_scan
from .oracles import pursuit_reward_scan, navigation_reward_scan
