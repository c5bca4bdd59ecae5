# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import json

import numpy as np
import pandas as pd
import pytest

import msgdrop as md
from msgdrop.harness import METRIC_COLUMNS, RunStreams, TOPOLOGIES
from msgdrop.harness import build_dqn_agents, build_run_env, dqn_policy
from msgdrop.harness import mode_for_rate, parse_config, random_policy
from msgdrop.harness import load_checkpoint
from msgdrop.harness.cli import main

TINY = '''
env.name = pursuit
env.n_pursuers = 3
env.n_evaders = 1
env.width = 7
env.height = 7
env.horizon = 20
agent.mode = DCC_MD
agent.p = 0.2
agent.batch_size = 8
agent.buffer_size = 500
agent.warmup_factor = 2
agent.train_every = 4
agent.target_sync = 10
agent.eps_anneal = 100
train.total_steps = 120
train.eval_every = 60
train.eval_episodes = 2
train.progress = false
'''

TINY_WATER = '''
env.name = waterworld
env.n_pursuers = 3
env.coop_k = 2
env.horizon = 20
agent.mode = MADDPG_MD
agent.p = 0.3
agent.lr = 1e-3
agent.gamma = 0.95
agent.batch_size = 8
agent.buffer_size = 500
agent.warmup_factor = 2
agent.critic_every = 2
agent.actor_every = 4
agent.target_sync = 5
train.total_steps = 60
train.eval_every = 30
train.eval_episodes = 1
train.progress = false
'''


def _tiny(**overrides):
    cfg = parse_config(TINY)
    for key, value in overrides.items():
        section, name = key.split('__')
        setattr(getattr(cfg, section), name, value)
    return cfg.validate()


def test_zero_step_run_writes_header_only(tmp_path):
    frame = md.run_training(_tiny(train__total_steps=0), tmp_path / 'run')
    assert len(frame) == 0
    text = (tmp_path / 'run' / 'metrics.csv').read_text()
    assert text.strip() == ','.join(METRIC_COLUMNS)
    assert (tmp_path / 'run' / 'checkpoints' / 'final').is_dir()


def test_training_run(tmp_path):
    cfg = _tiny(train__checkpoint_every=60)
    frame = md.run_training(cfg, tmp_path / 'run')
    assert list(frame.step) == [60, 120]
    assert (frame.run_id == 'pursuit_DCC_MD_p0.2_s0').all()
    assert frame.wallclock_s.isna().all()
    assert np.isfinite(frame.loss).all()
    assert frame.eps.iloc[-1] == 0.02

    on_disk = md.read_metrics(tmp_path / 'run' / 'metrics.csv')
    assert np.allclose(on_disk.catches, frame.catches)
    for name in ('step_60', 'step_120', 'final'):
        kind, agents, step = load_checkpoint(tmp_path / 'run' / 'checkpoints'
                                             / name)
        assert kind == 'dqn' and len(agents) == 3
    assert step == 120
    assert md.load_config(tmp_path / 'run' / 'config.txt') == cfg


def test_runs_are_reproducible(tmp_path):
    md.run_training(_tiny(), tmp_path / 'first')
    md.run_training(_tiny(), tmp_path / 'second')
    first = (tmp_path / 'first' / 'metrics.csv').read_bytes()
    second = (tmp_path / 'second' / 'metrics.csv').read_bytes()
    assert first == second

    md.run_training(_tiny(train__seed=1), tmp_path / 'third')
    third = (tmp_path / 'third' / 'metrics.csv').read_bytes()
    assert third != first


def test_wallclock_is_opt_in(tmp_path):
    frame = md.run_training(_tiny(train__record_wallclock=True,
                                  train__total_steps=60), tmp_path / 'run')
    assert (frame.wallclock_s > 0).all()


def test_ddpg_run(tmp_path):
    cfg = parse_config(TINY_WATER)
    frame = md.run_training(cfg, tmp_path / 'run')
    assert list(frame.step) == [30, 60]
    assert (frame['mode'] == 'MADDPG_MD').all()
    kind, learner, _ = load_checkpoint(tmp_path / 'run' / 'checkpoints'
                                       / 'final')
    assert kind == 'ddpg'
    assert learner.n_agents == 3

    summary = md.harness.evaluate_checkpoint(tmp_path / 'run', 2, 'all')
    assert summary['episodes'] == 2
    assert summary['mode'] == 'MADDPG_MD'


def test_trajectory_dump(tmp_path):
    dump = tmp_path / 'traj.jsonl'
    md.run_training(_tiny(train__total_steps=20, train__eval_every=20,
                          train__trajectory_dump=str(dump)),
                    tmp_path / 'run')
    records = [json.loads(line) for line in dump.read_text().splitlines()]
    assert 0 < len(records) <= 3 * 20
    assert len(records) % 3 == 0
    assert {rr['agent'] for rr in records} == {0, 1, 2}
    assert set(records[0]) == {'episode', 't', 'agent', 'x', 'y', 'action',
                               'reward'}


def test_run_streams():
    first = RunStreams(7)
    second = RunStreams(7)
    assert first.draw_seed('env') == second.draw_seed('env')
    assert first.env.random() != first.explore.random()

    masks = RunStreams(7).spawn('mask', 3)
    again = RunStreams(7).spawn('mask', 3)
    assert [mm.random() for mm in masks] == [mm.random() for mm in again]
    assert len({mm.random() for mm in masks}) == 3

    with pytest.raises(ValueError):
        first['weather']
    with pytest.raises(ValueError):
        first.spawn('weather', 2)


def test_link_failure_parsing():
    assert md.LinkFailure.parse('prob:0.3').q == 0.3
    assert str(md.LinkFailure.parse(' half ')) == 'half'
    assert str(md.LinkFailure('prob', 0.25)) == 'prob:0.25'
    for text in ('sometimes', 'prob:x', 'prob:1.5'):
        with pytest.raises(ValueError):
            md.LinkFailure.parse(text)


def test_connectivity():
    rng = np.random.default_rng(0)
    half = md.LinkFailure('half').connectivity(4, rng)
    first = next(half)
    assert np.array_equal(first, first.T)
    assert first.diagonal().all()
    assert (~first).sum() == 2 * 3
    assert all(np.array_equal(next(half), first) for _ in range(10))

    full = next(md.LinkFailure('all').connectivity(4, rng))
    assert np.array_equal(full, np.eye(4, dtype=bool))
    assert next(md.LinkFailure().connectivity(4, rng)).all()

    prob = md.LinkFailure('prob', 0.3).connectivity(5, rng)
    samples = np.array([next(prob) for _ in range(2000)])
    assert all(np.array_equal(ss, ss.T) for ss in samples[:50])
    off = ~np.eye(5, dtype=bool)
    assert abs(1. - samples[:, off].mean() - 0.3) < 0.02


def _agents(mode, p):
    cfg = _tiny(agent__mode=mode, agent__p=p)
    env = build_run_env(cfg)
    return env, build_dqn_agents(cfg, env, RunStreams(0))


@pytest.mark.parametrize('mode, p', [('FDC', 0.), ('DCC_MD', 1.)])
def test_message_free_policies_ignore_link_failures(mode, p):
    env, agents = _agents(mode, p)
    policy = dqn_policy(agents, eps=0.1)
    reference = md.evaluate(policy, env, 3, seed=11)
    for failure in ('half', 'all', 'prob:0.5'):
        summary = md.evaluate(policy, env, 3, failure, seed=11)
        assert summary['catches'] == reference['catches']
        assert summary['returns'] == reference['returns']


def test_evaluation_does_not_learn():
    env, agents = _agents('DCC_MD', 0.2)
    before = [agent.online.copy() for agent in agents]
    md.evaluate(dqn_policy(agents, 0.05), env, 2, 'prob:0.2', seed=3)
    assert all(agent.online.equals(bb) for agent, bb in zip(agents, before))
    assert all(agent.updates == 0 for agent in agents)


def test_random_policy_baseline():
    env = md.make_env('pursuit', n_pursuers=3, n_evaders=1, width=7,
                      height=7, horizon=20)
    first = md.random_policy_baseline(env, 4, seed=5)
    second = md.random_policy_baseline(env, 4, seed=5)
    assert first['returns'] == second['returns']
    assert first['mean_catches'] == np.mean(first['catches'])
    assert np.isclose(first['std_return'], np.std(first['returns']))

    water = md.make_env('waterworld', n_pursuers=3, coop_k=2, horizon=10)
    actions = random_policy(water)(None, None, np.random.default_rng(0))
    assert actions.shape == (3, 2)
    assert np.all(np.abs(actions) <= 1.)


def test_evaluate_rejects_zero_episodes():
    env = md.make_env('navigation', n_agents=2, n_landmarks=2)
    with pytest.raises(ValueError):
        md.random_policy_baseline(env, 0)


def test_mode_for_rate():
    assert mode_for_rate('DCC_MD', 0.) == md.Mode.DCC
    assert mode_for_rate('DCC_MD', 1.) == md.Mode.FDC
    assert mode_for_rate('DCC_MD', 0.5) == md.Mode.DCC_MD
    assert mode_for_rate('MADDPG_MD', 0.) == md.Mode.MADDPG
    assert mode_for_rate('SD', 0.) == md.Mode.SD


def test_sweep(tmp_path):
    template = _tiny(train__total_steps=40, train__eval_every=40,
                     train__eval_episodes=1)
    raw, summary = md.sweep(template, [0., 0.5, 1.], 2, tmp_path,
                            progress=False)
    assert len(raw) == 6
    assert list(raw['mode']) == ['DCC'] * 2 + ['DCC_MD'] * 2 + ['FDC'] * 2
    assert list(raw.seed) == [0, 1] * 3
    assert (raw.step == 40).all()
    assert (tmp_path / 'sweep_raw.csv').exists()
    assert (tmp_path / 'sweep_summary.csv').exists()
    for run_id in raw.run_id:
        assert (tmp_path / run_id / 'metrics.csv').exists()

    assert list(summary['mode']) == ['DCC', 'DCC_MD', 'FDC']
    assert (summary.n_seeds == 2).all()
    for _, row in summary.iterrows():
        group = raw[(raw['mode'] == row['mode']) & (raw.p == row.p)]
        assert np.isclose(row.mean_catches, group.catches.mean())
        assert np.isclose(row.std_catches, np.std(group.catches))
        assert np.isclose(row.mean_auc, group.auc.mean())
    # one evaluation per run: the curve is a single point
    assert np.allclose(raw.auc, raw.catches, equal_nan=True)
    assert (raw.eval_episodes == 1).all()


def test_sweep_final_evaluation(tmp_path):
    template = _tiny(train__total_steps=40, train__eval_every=20,
                     train__eval_episodes=1)
    raw, _ = md.sweep(template, [0.5], 2, tmp_path, progress=False,
                      final_episodes=2, link_failures=['none', 'all'])
    assert (raw.eval_episodes == 2).all()
    links = pd.read_csv(tmp_path / 'sweep_links.csv')
    assert list(links.link_failure) == ['none', 'all'] * 2
    assert (links.episodes == 2).all()
    clean = links[links.link_failure == 'none']
    assert np.allclose(raw.catches.to_numpy(), clean.mean_catches.to_numpy())
    assert np.allclose(raw.mean_return.to_numpy(),
                       clean.mean_return.to_numpy())

    for _, row in raw.iterrows():
        metrics = md.read_metrics(tmp_path / row.run_id / 'metrics.csv')
        assert list(metrics.step) == [20, 40]
        assert np.isclose(row.auc, metrics.catches.mean())

    summary = pd.read_csv(tmp_path / 'sweep_links_summary.csv')
    assert list(summary.link_failure) == ['none', 'all']
    assert (summary.n_seeds == 2).all()


def test_link_failure_study(tmp_path):
    template = _tiny(train__total_steps=40, train__eval_every=40,
                     train__eval_episodes=1)
    links, summary = md.link_failure_study(
        template, tmp_path, modes=['FDC', 'DCC_MD'], p=0.5, seeds=2,
        episodes=2, link_failures=['none', 'half', 'all'], progress=False)
    assert len(links) == 2 * 2 * 3
    assert set(links[links['mode'] == 'FDC'].p) == {0.}
    assert set(links[links['mode'] == 'DCC_MD'].p) == {0.5}
    for seed in (0, 1):
        fdc = links[(links['mode'] == 'FDC') & (links.seed == seed)]
        assert fdc.mean_catches.nunique() == 1
        assert fdc.mean_return.nunique() == 1

    assert list(summary['mode']) == ['FDC'] * 3 + ['DCC_MD'] * 3
    assert list(summary.link_failure) == ['none', 'half', 'all'] * 2
    assert (summary.n_seeds == 2).all()
    for _, row in summary.iterrows():
        group = links[(links['mode'] == row['mode'])
                      & (links.link_failure == row.link_failure)]
        assert np.isclose(row.mean_catches, group.mean_catches.mean())
        assert np.isclose(row.std_catches, np.std(group.mean_catches))
    for name in ('study_raw', 'study_summary', 'study_links',
                 'study_links_summary'):
        assert (tmp_path / f'{name}.csv').exists()

    with pytest.raises(ValueError):
        md.link_failure_study(template, tmp_path, modes=[], progress=False)
    with pytest.raises(ValueError):
        md.link_failure_study(template, tmp_path, link_failures=['bogus'],
                              seeds=1, progress=False)


def test_gradcheck_suite():
    table = md.run_gradcheck_suite()
    assert list(table.topology) == list(TOPOLOGIES)
    assert table.passed.all()
    assert (table.max_rel_error < 1e-4).all()


def test_cli_train_and_eval(tmp_path, capsys):
    config = tmp_path / 'tiny.txt'
    config.write_text(TINY)
    out = tmp_path / 'out'
    assert main(['train', '--config', str(config), '--out', str(out),
                 '--steps', '60']) == 0
    run_dir = out / 'pursuit_DCC_MD_p0.2_s0'
    assert len(md.read_metrics(run_dir / 'metrics.csv')) == 1
    assert (run_dir / 'train.log').exists()

    assert main(['eval', '--checkpoint-dir', str(run_dir), '--episodes', '2',
                 '--link-failure', 'half']) == 0
    assert 'over 2 episodes' in capsys.readouterr().out

    assert main(['eval', '--checkpoint-dir', str(tmp_path / 'missing')]) == 1
    assert 'error:' in capsys.readouterr().err


def test_cli_output_root(tmp_path, monkeypatch):
    monkeypatch.setenv('DNMD_OUT', str(tmp_path / 'from_env'))
    assert main(['train', '--preset', 'pursuit-small', '--steps', '0',
                 '--seed', '2']) == 0
    run_dir = tmp_path / 'from_env' / 'pursuit_DCC_MD_p0.2_s2'
    assert (run_dir / 'metrics.csv').exists()

    assert main(['train', '--preset', 'pursuit-small', '--steps', '0',
                 '--out', str(tmp_path / 'explicit')]) == 0
    assert (tmp_path / 'explicit' / 'pursuit_DCC_MD_p0.2_s0').is_dir()


def test_cli_errors(tmp_path):
    bad = tmp_path / 'bad.txt'
    bad.write_text('agent.colour = red\n')
    assert main(['train', '--config', str(bad)]) == 1
    with pytest.raises(SystemExit):
        main(['train'])
    with pytest.raises(SystemExit):
        main(['sweep', '--preset', 'nav-small', '--p', 'a,b'])


def test_cli_pretrain_autoencoder(tmp_path):
    assert main(['pretrain-ae', '--samples', '64', '--epochs', '1',
                 '--out', str(tmp_path)]) == 0
    ae = md.Autoencoder.load(tmp_path / 'autoencoder')
    assert ae.code_dim == 32


def test_cli_study_and_final_sweep(tmp_path, capsys):
    config = tmp_path / 'tiny.txt'
    config.write_text(TINY)
    out = tmp_path / 'out'
    assert main(['study', '--config', str(config), '--out', str(out),
                 '--modes', 'FDC,DCC', '--seeds', '1', '--steps', '60',
                 '--episodes', '1', '--link-failures', 'none,all']) == 0
    assert 'study tables written' in capsys.readouterr().out
    summary = pd.read_csv(out / 'study_links_summary.csv')
    assert list(summary['mode']) == ['FDC', 'FDC', 'DCC', 'DCC']

    assert main(['sweep', '--config', str(config), '--out', str(out),
                 '--p', '0.5', '--seeds', '1', '--steps', '60',
                 '--final-episodes', '1', '--link-failures',
                 'none,half']) == 0
    links = pd.read_csv(out / 'sweep_links.csv')
    assert list(links.link_failure) == ['none', 'half']

    assert main(['study', '--config', str(config), '--out', str(out),
                 '--seeds', '1', '--link-failures', 'sometimes']) == 1
    assert 'error:' in capsys.readouterr().err
