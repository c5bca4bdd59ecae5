# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np
import pandas as pd
from tqdm import tqdm

from ..agents import AgentMode, Mode, parse_mode
from .checkpoints import evaluate_checkpoint
from .evaluation import LinkFailure
from .metrics import curve_auc
from .training import run_training

log = logging.getLogger(__name__)

RAW_COLUMNS = ('run_id', 'env', 'mode', 'p', 'seed', 'step',
               'eval_episodes', 'catches', 'mean_return', 'auc')

LINK_COLUMNS = ('run_id', 'env', 'mode', 'p', 'seed', 'link_failure',
                'episodes', 'mean_catches', 'std_catches', 'mean_return',
                'std_return')

STUDY_MODES = ('DCC', 'DCC_MD', 'FULL_MD')
STUDY_LINK_FAILURES = ('none', 'half', 'all')


def mode_for_rate(mode, p):
    '''
    Label actually trained at rate ``p``: the dropout template reduces to
    its baseline at the ends of the range (DCC at 0, FDC at 1 for DCC_MD;
    MADDPG at 0 for MADDPG_MD).
    '''
    kind = parse_mode(mode)
    if kind == Mode.DCC_MD and p == 0.:
        return Mode.DCC
    if kind == Mode.DCC_MD and p == 1.:
        return Mode.FDC
    if kind == Mode.MADDPG_MD and p == 0.:
        return Mode.MADDPG
    return kind


def _seed_list(seeds):
    return list(range(seeds)) if isinstance(seeds, int) else list(seeds)


def _configure(template, mode, p, seed):
    cfg = template.copy()
    cfg.agent.mode = mode
    cfg.agent.p = p
    cfg.train.seed = int(seed)
    cfg.train.run_id = ''
    cfg.train.progress = False
    return cfg.validate()


def sweep_configs(template, p_list, seeds):
    '''One configuration per (p, seed), p-major.'''
    return [_configure(template, mode_for_rate(template.agent.mode,
                                               float(pp)).value,
                       float(pp), seed)
            for pp in p_list for seed in _seed_list(seeds)]


def study_configs(template, modes, p, seeds):
    '''
    One configuration per (mode, seed), mode-major. Modes without dropout
    are trained at ``p = 0``.
    '''
    configs = []
    for mode in modes:
        kind = parse_mode(mode)
        rate = float(p) if AgentMode(kind, p).masked else 0.
        configs.extend(_configure(template, kind.value, rate, seed)
                       for seed in _seed_list(seeds))
    return configs


def _run_one(task):
    cfg, run_dir, final_episodes, link_failures = task
    frame = run_training(cfg, run_dir)
    row = {'run_id': cfg.run_id, 'env': cfg.env, 'mode': cfg.mode.label,
           'p': cfg.agent.p, 'seed': cfg.train.seed,
           'step': int(frame['step'].iloc[-1]) if len(frame) else 0,
           'eval_episodes': cfg.train.eval_episodes,
           'catches': float('nan'), 'mean_return': float('nan'),
           'auc': curve_auc(frame['step'], frame['catches'])}
    if len(frame):
        row['catches'] = float(frame['catches'].iloc[-1])
        row['mean_return'] = float(frame['mean_return'].iloc[-1])

    links = []
    for text in (link_failures if final_episodes else ()):
        link_failure = LinkFailure.parse(text)
        # same seed for every failure kind: identical episode starts
        summary = evaluate_checkpoint(run_dir, final_episodes, link_failure,
                                      seed=cfg.train.seed,
                                      eps=cfg.train.eval_eps)
        links.append({'run_id': cfg.run_id, 'env': cfg.env,
                      'mode': cfg.mode.label, 'p': cfg.agent.p,
                      'seed': cfg.train.seed,
                      'link_failure': str(link_failure),
                      'episodes': summary['episodes'],
                      'mean_catches': summary['mean_catches'],
                      'std_catches': summary['std_catches'],
                      'mean_return': summary['mean_return'],
                      'std_return': summary['std_return']})
        if link_failure.kind == 'none':
            row.update(eval_episodes=summary['episodes'],
                       catches=summary['mean_catches'],
                       mean_return=summary['mean_return'])
    return row, links


def _population_std(values):
    return float(np.std(np.asarray(values, dtype=np.float64)))


def aggregate(raw):
    '''Mean and standard deviation over seeds for every (mode, p).'''
    return (raw.groupby(['mode', 'p'], sort=False)
               .agg(n_seeds=('seed', 'count'),
                    mean_catches=('catches', 'mean'),
                    std_catches=('catches', _population_std),
                    mean_return=('mean_return', 'mean'),
                    std_return=('mean_return', _population_std),
                    mean_auc=('auc', 'mean'),
                    std_auc=('auc', _population_std))
               .reset_index())


def aggregate_links(links):
    '''
    Mean and standard deviation over seeds of the per-run evaluation means
    for every (mode, p, link failure).
    '''
    return (links.groupby(['mode', 'p', 'link_failure'], sort=False)
                 .agg(n_seeds=('seed', 'count'),
                      mean_catches=('mean_catches', 'mean'),
                      std_catches=('mean_catches', _population_std),
                      mean_return=('mean_return', 'mean'),
                      std_return=('mean_return', _population_std))
                 .reset_index())


def run_batch(configs, out_root, workers=1, progress=True, final_episodes=0,
              link_failures=('none',), name='sweep'):
    '''
    Train ``configs``, one directory each under ``out_root``, and tabulate
    them.

    Writes ``<name>_raw.csv`` and ``<name>_summary.csv``; with
    ``final_episodes`` also ``<name>_links.csv`` and
    ``<name>_links_summary.csv``.

    Returns:
        (pandas.DataFrame, pandas.DataFrame): raw rows and link-failure
        rows (empty without ``final_episodes``).
    '''
    if final_episodes < 0:
        raise ValueError(f'final_episodes must be >= 0, got {final_episodes}')
    link_failures = [str(LinkFailure.parse(text)) for text in link_failures]
    out_root = Path(out_root)
    tasks = [(cfg, out_root / cfg.run_id, final_episodes, link_failures)
             for cfg in configs]
    if len({task[1] for task in tasks}) != len(tasks):
        raise ValueError('run ids of the batch are not unique')

    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(tqdm(executor.map(_run_one, tasks),
                                total=len(tasks), desc=name.capitalize(),
                                disable=not progress))
    else:
        results = [_run_one(task) for task in tqdm(
            tasks, desc=name.capitalize(), disable=not progress)]

    raw = pd.DataFrame([row for row, _ in results], columns=list(RAW_COLUMNS))
    links = pd.DataFrame([ll for _, rows in results for ll in rows],
                         columns=list(LINK_COLUMNS))
    out_root.mkdir(parents=True, exist_ok=True)
    raw.to_csv(out_root / f'{name}_raw.csv', index=False)
    aggregate(raw).to_csv(out_root / f'{name}_summary.csv', index=False)
    if final_episodes:
        links.to_csv(out_root / f'{name}_links.csv', index=False)
        aggregate_links(links).to_csv(out_root / f'{name}_links_summary.csv',
                                      index=False)
    return raw, links


def sweep(template, p_list, seeds, out_root, workers=1, progress=True,
          final_episodes=0, link_failures=('none',)):
    '''
    Train every (p, seed) combination of ``template`` and tabulate the
    final evaluation of each run.

    Args:
        template (RunConfig): base configuration.
        p_list (list of float): dropout rates.
        seeds (int or list of int): seeds, ``n`` meaning ``0..n-1``.
        out_root (str or Path): receives one directory per run plus
            ``sweep_raw.csv`` and ``sweep_summary.csv``.
        workers (int): concurrent runs (separate processes).
        final_episodes (int): episodes of a dedicated evaluation of each
            final checkpoint; 0 keeps the last periodic evaluation.
        link_failures (list of str): failures evaluated with
            ``final_episodes``; the ``none`` result replaces the periodic
            one in the raw table.

    Returns:
        (pandas.DataFrame, pandas.DataFrame): raw rows and the summary.
    '''
    if not len(p_list):
        raise ValueError('empty dropout rate list')
    configs = sweep_configs(template, p_list, seeds)
    log.info(f'Sweeping {len(configs)} runs of {template.env} over p '
             f'{list(p_list)}')
    raw, _ = run_batch(configs, out_root, workers, progress, final_episodes,
                       link_failures, name='sweep')
    return raw, aggregate(raw)


def link_failure_study(template, out_root, modes=STUDY_MODES, p=0.2,
                       seeds=5, episodes=50,
                       link_failures=STUDY_LINK_FAILURES, workers=1,
                       progress=True):
    '''
    Train ``modes`` over ``seeds`` and evaluate every final policy under
    each link failure, all with the same episode seeds.

    Writes the ``study_*.csv`` tables of :func:`run_batch` to ``out_root``.

    Returns:
        (pandas.DataFrame, pandas.DataFrame): per-run link-failure rows and
        their mean and standard deviation over seeds per
        (mode, p, link failure).
    '''
    if not len(modes):
        raise ValueError('empty mode list')
    if episodes <= 0:
        raise ValueError(f'episodes must be positive, got {episodes}')
    configs = study_configs(template, modes, p, seeds)
    log.info(f'Link failure study: {len(configs)} runs of {template.env}, '
             f'modes {list(modes)}, failures {list(link_failures)}')
    _, links = run_batch(configs, out_root, workers, progress, episodes,
                         link_failures, name='study')
    return links, aggregate_links(links)
