# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

from pathlib import Path

import numpy as np
import pandas as pd
from scipy.integrate import trapezoid

METRIC_COLUMNS = ('run_id', 'seed', 'mode', 'p', 'env', 'step',
                  'episodes_done', 'mean_return', 'catches', 'loss', 'eps',
                  'wallclock_s')


def mean_and_std(a, weights=None):
    a = np.asarray(a, dtype=np.float64)
    if len(a) == 0:
        return float('nan'), float('nan')
    if weights is None:
        mean = a.sum()/len(a)
        std = np.sqrt(((a-mean)**2).sum() / len(a))
    else:
        weights = np.asarray(weights, dtype=np.float64)
        assert len(weights) == len(a)
        tot = weights.sum()
        mean = (a*weights).sum() / tot
        std = np.sqrt(((a-mean)**2 * weights).sum() / tot)

    return float(mean), float(std)


def curve_auc(steps, values):
    '''
    Area under a learning curve sampled at ``steps``, divided by the
    covered step span: the time-averaged level of the curve. A single
    point gives its own value, no point gives NaN.
    '''
    steps = np.asarray(steps, dtype=np.float64)
    values = np.asarray(values, dtype=np.float64)
    if len(steps) != len(values):
        raise ValueError(f'{len(steps)} steps for {len(values)} values')
    if len(steps) == 0:
        return float('nan')
    if len(steps) == 1 or steps[-1] == steps[0]:
        return float(values[-1])
    if np.any(np.diff(steps) < 0):
        raise ValueError('curve steps must be non-decreasing')
    return float(trapezoid(values, steps) / (steps[-1] - steps[0]))


def metrics_frame(rows=()):
    '''Rows (dicts or sequences) as a table with the metric columns.'''
    rows = list(rows)
    if rows and isinstance(rows[0], dict):
        missing = set(METRIC_COLUMNS) - set(rows[0])
        extra = set(rows[0]) - set(METRIC_COLUMNS)
        if missing or extra:
            raise ValueError(f'metric row keys do not match the columns '
                             f'(missing {sorted(missing)}, extra '
                             f'{sorted(extra)})')
    return pd.DataFrame(rows, columns=list(METRIC_COLUMNS))


def emit_metrics(rows, path):
    '''
    Append ``rows`` to the CSV at ``path``. The header is written when the
    file is new or empty, so an empty stream gives a header-only file.
    Floats are written in their shortest round-trip form.

    Returns:
        Path: the CSV path.
    '''
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = rows if isinstance(rows, pd.DataFrame) else metrics_frame(rows)
    if list(frame.columns) != list(METRIC_COLUMNS):
        raise ValueError(f'unexpected metric columns {list(frame.columns)}')
    new_file = not path.exists() or path.stat().st_size == 0
    frame.to_csv(path, mode='w' if new_file else 'a', header=new_file,
                 index=False)
    return path


def read_metrics(path):
    frame = pd.read_csv(path, dtype={'run_id': str, 'mode': str, 'env': str})
    if list(frame.columns) != list(METRIC_COLUMNS):
        raise ValueError(f'{path} does not hold a metrics table')
    return frame
