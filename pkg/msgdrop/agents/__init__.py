# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .modes import Mode, AgentMode, parse_mode, DQN_MODES, DDPG_MODES
from .architectures import QArchitecture, CriticArchitecture
from .architectures import pursuit_architecture, navigation_architecture
from .architectures import architecture_for
from .qnet import QNet, q_values
from .dqn import DQNAgent, EpsilonSchedule, td_target, act, train_step
from .dqn import sync_target
from .ddpg import Actor, Critic, NoiseProcess, DDPGLearner
from .ddpg import act_ddpg, critic_value, policy_gradient
from .ddpg import critic_train_step, actor_train_step, shared_update
