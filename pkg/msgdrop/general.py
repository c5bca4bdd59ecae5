# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import logging
from pathlib import Path

_pkg_root = Path(__file__).parent.absolute()

LOG_FORMAT = '%(asctime)s--%(levelname)s--%(message)s'


def setup_logging(level='INFO', logfile=None):
    '''
    Configure the ``msgdrop`` logger hierarchy.

    Args:
        level (str or int): logging level applied to the package logger.
        logfile (str or Path): optional file receiving a copy of every
            record.

    Returns:
        logging.Logger: the configured package logger.
    '''
    logger = logging.getLogger('msgdrop')
    logger.setLevel(level)
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)
    stream = logging.StreamHandler()
    stream.setFormatter(formatter)
    logger.addHandler(stream)

    if logfile is not None:
        Path(logfile).parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(logfile)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger


def parse_key_values(text):
    '''
    Parse flat ``key = value`` text: one key per line, ``#`` starts a
    comment, blank lines are ignored.

    Returns:
        list of (int, str, str): line number, key and value of each entry.
    '''
    entries = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ValueError(f'line {lineno}: expected key = value, got '
                             f'{raw.strip()!r}')
        key, value = (part.strip() for part in line.split('=', 1))
        if not key:
            raise ValueError(f'line {lineno}: empty key')
        entries.append((lineno, key, value))
    return entries


def read_key_values(path):
    values = {}
    for lineno, key, value in parse_key_values(Path(path).read_text()):
        if key in values:
            raise ValueError(f'{path}:{lineno}: duplicate key {key}')
        values[key] = value
    return values


def write_key_values(values, path, header=None):
    lines = [] if header is None else [f'# {header}']
    lines.extend(f'{kk} = {vv}' for kk, vv in values.items())
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text('\n'.join(lines) + '\n')
    return path
