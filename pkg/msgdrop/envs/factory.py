# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from .pursuit import PursuitConfig, PursuitEnv
from .navigation import NavConfig, NavigationEnv
from .waterworld import WaterConfig, WaterworldEnv

ENVIRONMENTS = {
    'pursuit': (PursuitConfig, PursuitEnv),
    'navigation': (NavConfig, NavigationEnv),
    'waterworld': (WaterConfig, WaterworldEnv),
}


def env_config_class(name):
    if name not in ENVIRONMENTS:
        raise ValueError(f'environment {name} not recognized')
    return ENVIRONMENTS[name][0]


def make_env(name, **params):
    config_class, env_class = ENVIRONMENTS.get(name, (None, None))
    if config_class is None:
        raise ValueError(f'environment {name} not recognized')
    return env_class(config_class(**params))
