# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .nncore import Mlp, LayerSpec, Gradients, AdamState, adam_step
from .nncore import mlp_init, forward, backward, grad_check
from .nncore import save_mlp, load_mlp, CheckpointError

from .masking import BlockLayout, BlockMask, sample_block_mask
from .masking import sample_element_mask, apply_mask, exec_scale

from .envs import PursuitConfig, PursuitEnv, NavConfig, NavigationEnv
from .envs import WaterConfig, WaterworldEnv, make_env, TrajectoryRecorder

from .replay import Transition, ReplayMemory

from .agents import Mode, AgentMode, QNet, DQNAgent, EpsilonSchedule
from .agents import Actor, Critic, DDPGLearner

from .autoenc import Autoencoder, pretrain, encode

from .harness import RunConfig, ConfigError, load_config, preset_config
from .harness import run_training, evaluate, LinkFailure, sweep
from .harness import link_failure_study, curve_auc
from .harness import emit_metrics, read_metrics, mean_and_std
from .harness import run_gradcheck_suite, random_policy_baseline

from .general import _pkg_root, setup_logging

from ._version import __version__
