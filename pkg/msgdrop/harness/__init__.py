# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .config import RunConfig, AgentSettings, TrainSettings, ConfigError
from .config import PRESETS, parse_config, load_config, write_config
from .config import preset_config
from .seeding import RunStreams, STREAM_NAMES
from .metrics import METRIC_COLUMNS, emit_metrics, read_metrics
from .metrics import metrics_frame, mean_and_std, curve_auc
from .evaluation import LinkFailure, evaluate, dqn_policy, ddpg_policy
from .evaluation import random_policy, random_policy_baseline
from .checkpoints import save_checkpoint, load_checkpoint, find_checkpoint
from .checkpoints import evaluate_checkpoint, build_run_env
from .training import run_training, build_dqn_agents, build_ddpg_learner
from .sweep import sweep, sweep_configs, aggregate, mode_for_rate
from .sweep import run_batch, study_configs, aggregate_links
from .sweep import link_failure_study
from .gradcheck_suite import run_gradcheck_suite, TOPOLOGIES
