# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import dataclasses
from dataclasses import dataclass, field
from pathlib import Path

from ..agents import AgentMode
from ..envs import env_config_class
from ..general import parse_key_values, write_key_values


class ConfigError(ValueError):
    pass


@dataclass
class AgentSettings:
    '''Learner settings (``agent.`` keys).'''

    mode: str = 'DCC_MD'
    p: float = 0.2
    lr: float = 1e-4
    gamma: float = 0.99
    batch_size: int = 32
    buffer_size: int = 200_000
    warmup_factor: int = 10
    train_every: int = 4
    target_sync: int = 2000
    eps_start: float = 1.
    eps_end: float = 0.02
    eps_anneal: int = 2_000_000
    critic_every: int = 5
    actor_every: int = 10
    noise_sigma: float = 0.15
    share_params: bool = True
    message_encoder: str = ''


@dataclass
class TrainSettings:
    '''Run settings (``train.`` keys).'''

    total_steps: int = 300_000
    seed: int = 0
    out_dir: str = 'runs'
    run_id: str = ''
    eval_every: int = 25_000
    eval_episodes: int = 10
    eval_eps: float = 0.
    checkpoint_every: int = 0
    progress: bool = True
    log_level: str = 'INFO'
    record_wallclock: bool = False
    trajectory_dump: str = ''


PRESETS = {
    'pursuit-small': {
        'env.name': 'pursuit', 'env.n_pursuers': 4, 'env.n_evaders': 2,
        'env.width': 10, 'env.height': 10,
        'agent.mode': 'DCC_MD', 'agent.p': 0.2, 'agent.buffer_size': 50_000,
        'agent.eps_anneal': 150_000, 'train.total_steps': 300_000,
        'train.eval_every': 25_000, 'train.eval_episodes': 10},
    'pursuit-6': {
        'env.name': 'pursuit', 'env.n_pursuers': 6, 'env.width': 15,
        'env.height': 15, 'agent.mode': 'DCC_MD', 'agent.p': 0.2,
        'train.total_steps': 3_000_000, 'train.eval_every': 50_000},
    'pursuit-8': {
        'env.name': 'pursuit', 'env.n_pursuers': 8, 'env.width': 17,
        'env.height': 17, 'agent.mode': 'DCC_MD', 'agent.p': 0.2,
        'train.total_steps': 3_000_000, 'train.eval_every': 50_000},
    'nav-small': {
        'env.name': 'navigation', 'env.n_agents': 4, 'env.n_landmarks': 4,
        'agent.mode': 'DCC_MD', 'agent.p': 0.2, 'agent.buffer_size': 50_000,
        'agent.eps_anneal': 100_000, 'train.total_steps': 200_000,
        'train.eval_every': 20_000},
    'nav-8': {
        'env.name': 'navigation', 'env.n_agents': 8, 'env.n_landmarks': 8,
        'agent.mode': 'DCC_MD', 'agent.p': 0.2, 'agent.eps_anneal': 400_000,
        'train.total_steps': 1_000_000, 'train.eval_every': 50_000},
    'nav-10': {
        'env.name': 'navigation', 'env.n_agents': 10, 'env.n_landmarks': 10,
        'agent.mode': 'DCC_MD', 'agent.p': 0.2, 'agent.eps_anneal': 400_000,
        'train.total_steps': 1_000_000, 'train.eval_every': 50_000},
    'water-small': {
        'env.name': 'waterworld', 'env.n_pursuers': 4, 'env.coop_k': 2,
        'agent.mode': 'MADDPG_MD', 'agent.p': 0.2, 'agent.lr': 1e-3,
        'agent.gamma': 0.95, 'agent.buffer_size': 100_000,
        'agent.target_sync': 500, 'train.total_steps': 200_000,
        'train.eval_every': 20_000},
    'water-8': {
        'env.name': 'waterworld', 'env.n_pursuers': 8, 'env.coop_k': 4,
        'agent.mode': 'MADDPG_MD', 'agent.p': 0.2, 'agent.lr': 1e-3,
        'agent.gamma': 0.95, 'agent.buffer_size': 500_000,
        'agent.target_sync': 500, 'train.total_steps': 2_000_000,
        'train.eval_every': 50_000},
    'water-10': {
        'env.name': 'waterworld', 'env.n_pursuers': 10, 'env.coop_k': 5,
        'agent.mode': 'MADDPG_MD', 'agent.p': 0.2, 'agent.lr': 1e-3,
        'agent.gamma': 0.95, 'agent.buffer_size': 500_000,
        'agent.target_sync': 500, 'train.total_steps': 2_000_000,
        'train.eval_every': 50_000},
}


def _coerce(value, typ, key):
    if not isinstance(value, str):
        value = str(value)
    try:
        if typ is bool:
            low = value.lower()
            if low in ('true', 'yes', '1', 'on'):
                return True
            if low in ('false', 'no', '0', 'off'):
                return False
            raise ValueError(value)
        if typ is int:
            try:
                return int(value)
            except ValueError:
                as_float = float(value)
                if not as_float.is_integer():
                    raise
                return int(as_float)
        if typ is float:
            return float(value)
        return value
    except ValueError:
        raise ConfigError(f'{key}: cannot read {value!r} as '
                          f'{typ.__name__}') from None


def _fmt(value):
    return repr(value) if isinstance(value, float) else str(value)


@dataclass
class RunConfig:
    '''
    Everything a training run needs: environment name and parameters
    (``env.`` keys), learner settings (``agent.``) and run settings
    (``train.``).
    '''

    env: str = 'pursuit'
    env_params: dict = field(default_factory=dict)
    agent: AgentSettings = field(default_factory=AgentSettings)
    train: TrainSettings = field(default_factory=TrainSettings)

    @classmethod
    def from_dict(cls, values, lines=None):
        '''
        Build from flat ``section.key`` values; a ``preset`` entry is applied
        first and the remaining entries override it.
        '''
        lines = lines or {}
        values = dict(values)
        merged = {}
        if 'preset' in values:
            name = str(values.pop('preset'))
            if name not in PRESETS:
                raise ConfigError(f'preset {name} not recognized')
            merged.update(PRESETS[name])
        merged.update(values)

        cfg = cls()
        env_name = str(merged.pop('env.name', cfg.env))
        try:
            env_class = env_config_class(env_name)
        except ValueError as err:
            raise ConfigError(str(err)) from None
        cfg.env = env_name
        env_fields = {ff.name: ff.type for ff in dataclasses.fields(env_class)}
        agent_fields = {ff.name: ff.type
                        for ff in dataclasses.fields(AgentSettings)}
        train_fields = {ff.name: ff.type
                        for ff in dataclasses.fields(TrainSettings)}

        for key, value in merged.items():
            where = (f'line {lines[key]}: ' if key in lines else '') + key
            section, _, name = key.partition('.')
            if section == 'env' and name in env_fields:
                cfg.env_params[name] = _coerce(value, env_fields[name], where)
            elif section == 'agent' and name in agent_fields:
                setattr(cfg.agent, name,
                        _coerce(value, agent_fields[name], where))
            elif section == 'train' and name in train_fields:
                setattr(cfg.train, name,
                        _coerce(value, train_fields[name], where))
            else:
                raise ConfigError(f'{where}: unknown key')
        cfg.validate()
        return cfg

    def to_dict(self):
        out = {'env.name': self.env}
        out.update({f'env.{kk}': _fmt(vv) for kk, vv in self.env_params.items()})
        for section, obj in (('agent', self.agent), ('train', self.train)):
            for ff in dataclasses.fields(obj):
                out[f'{section}.{ff.name}'] = _fmt(getattr(obj, ff.name))
        return out

    def copy(self):
        return RunConfig.from_dict(self.to_dict())

    @property
    def mode(self):
        return AgentMode(self.agent.mode, self.agent.p)

    @property
    def run_id(self):
        if self.train.run_id:
            return self.train.run_id
        return (f'{self.env}_{self.mode.label}_p{self.agent.p:g}'
                f'_s{self.train.seed}')

    def env_config(self):
        try:
            return env_config_class(self.env)(**self.env_params)
        except (TypeError, ValueError) as err:
            raise ConfigError(f'env: {err}') from None

    def validate(self):
        self.env_config()
        try:
            mode = self.mode
        except ValueError as err:
            raise ConfigError(f'agent: {err}') from None
        wants = 'ddpg' if self.env == 'waterworld' else 'dqn'
        if mode.family != wants:
            raise ConfigError(f'mode {mode.label} cannot run on {self.env}')

        ag = self.agent
        for name in ('batch_size', 'buffer_size', 'train_every',
                     'critic_every', 'actor_every', 'warmup_factor'):
            if getattr(ag, name) <= 0:
                raise ConfigError(f'agent.{name} must be positive')
        if ag.target_sync < 0 or ag.eps_anneal < 0:
            raise ConfigError('agent.target_sync and agent.eps_anneal must '
                              'be non-negative')
        if not (0. < ag.gamma <= 1.) or ag.lr <= 0.:
            raise ConfigError('agent.gamma must lie in (0, 1] and agent.lr '
                              'must be positive')
        if not (0. <= ag.eps_end <= 1. and 0. <= ag.eps_start <= 1.):
            raise ConfigError('epsilon bounds must lie in [0, 1]')
        if ag.noise_sigma < 0:
            raise ConfigError('agent.noise_sigma must be non-negative')
        if ag.message_encoder and self.env != 'pursuit':
            raise ConfigError('compressed messages are only available in '
                              'pursuit')

        tr = self.train
        if tr.total_steps < 0 or tr.checkpoint_every < 0:
            raise ConfigError('train.total_steps and train.checkpoint_every '
                              'must be non-negative')
        if tr.eval_every <= 0 or tr.eval_episodes <= 0:
            raise ConfigError('train.eval_every and train.eval_episodes must '
                              'be positive')
        if not 0. <= tr.eval_eps <= 1.:
            raise ConfigError('train.eval_eps must lie in [0, 1]')
        return self


def parse_config(text):
    try:
        entries = parse_key_values(text)
    except ValueError as err:
        raise ConfigError(str(err)) from None
    values = {}
    lines = {}
    for lineno, key, value in entries:
        if key in values:
            raise ConfigError(f'line {lineno}: duplicate key {key}')
        values[key] = value
        lines[key] = lineno
    return RunConfig.from_dict(values, lines)


def load_config(path):
    path = Path(path)
    if not path.exists():
        raise ConfigError(f'config file {path} not found')
    return parse_config(path.read_text())


def write_config(cfg, path):
    return write_key_values(cfg.to_dict(), path,
                            header=f'run configuration of {cfg.run_id}')


def preset_config(name, **overrides):
    '''Preset plus flat ``section.key`` overrides.'''
    values = {'preset': name}
    values.update(overrides)
    return RunConfig.from_dict(values)
