# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .base import EnvStep, MultiAgentEnv, concat_messages, message_of
from .pursuit import PursuitConfig, PursuitState, PursuitEnv
from .pursuit import pursuit_reset, pursuit_step, pursuit_observe
from .pursuit import pursuit_observe_all, pursuit_captures, center_cells
from .navigation import NavConfig, NavState, NavigationEnv
from .navigation import nav_reset, nav_step, nav_observe, nav_rewards
from .waterworld import WaterConfig, WaterState, WaterworldEnv
from .waterworld import water_reset, water_step, water_observe
from .waterworld import water_rewards, water_touches
from .trajectory import TrajectoryRecorder, read_trajectory
from .factory import make_env, env_config_class, ENVIRONMENTS
