# copyright ################################# #
# This file is part of the Msgdrop Package.   #
# Copyright (c) Msgdrop Devs, 2026.           #
# ########################################### #

import argparse
import logging
import os
import sys
from pathlib import Path

from .._version import __version__
from ..autoenc import collect_pursuit_samples, pretrain
from ..envs import PursuitConfig
from ..general import setup_logging
from .checkpoints import evaluate_checkpoint
from .config import RunConfig, load_config
from .evaluation import LinkFailure
from .gradcheck_suite import run_gradcheck_suite
from .sweep import STUDY_LINK_FAILURES, STUDY_MODES
from .sweep import link_failure_study, sweep
from .training import run_training

log = logging.getLogger(__name__)

OUT_ENV_VAR = 'DNMD_OUT'


def output_root(explicit=None, default='runs'):
    '''``--out`` first, then ``$DNMD_OUT``, then the configured root.'''
    if explicit:
        return Path(explicit)
    if os.environ.get(OUT_ENV_VAR):
        return Path(os.environ[OUT_ENV_VAR])
    return Path(default)


def _run_config(args):
    if args.config:
        cfg = load_config(args.config)
    else:
        cfg = RunConfig.from_dict({'preset': args.preset})
    if getattr(args, 'seed', None) is not None:
        cfg.train.seed = args.seed
    if getattr(args, 'steps', None) is not None:
        cfg.train.total_steps = args.steps
    cfg.train.out_dir = str(output_root(args.out, cfg.train.out_dir))
    return cfg.validate()


def _float_list(text):
    try:
        return [float(vv) for vv in text.split(',') if vv.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f'not a list of numbers: {text}')


def _name_list(text):
    names = [vv.strip() for vv in text.split(',') if vv.strip()]
    if not names:
        raise argparse.ArgumentTypeError(f'empty list: {text!r}')
    return names


def cmd_train(args):
    cfg = _run_config(args)
    run_dir = Path(cfg.train.out_dir) / cfg.run_id
    setup_logging(cfg.train.log_level, run_dir / 'train.log')
    frame = run_training(cfg, run_dir)
    if len(frame):
        last = frame.iloc[-1]
        print(f'{cfg.run_id}: step {int(last["step"])}, catches '
              f'{last["catches"]:.3f}, return {last["mean_return"]:.3f}')
    print(f'metrics written to {run_dir / "metrics.csv"}')
    return 0


def cmd_eval(args):
    summary = evaluate_checkpoint(args.checkpoint_dir, args.episodes,
                                  LinkFailure.parse(args.link_failure),
                                  seed=args.seed, eps=args.eps)
    print(f'{summary["run_id"]} [{args.link_failure}] over '
          f'{summary["episodes"]} episodes: catches '
          f'{summary["mean_catches"]:.3f} +- {summary["std_catches"]:.3f}, '
          f'return {summary["mean_return"]:.3f} +- '
          f'{summary["std_return"]:.3f}')
    return 0


def cmd_sweep(args):
    cfg = _run_config(args)
    out_root = Path(cfg.train.out_dir)
    _, summary = sweep(cfg, args.p, args.seeds, out_root,
                       workers=args.workers, progress=cfg.train.progress,
                       final_episodes=args.final_episodes,
                       link_failures=args.link_failures)
    print(summary.to_string(index=False))
    print(f'sweep tables written to {out_root}')
    return 0


def cmd_study(args):
    cfg = _run_config(args)
    out_root = Path(cfg.train.out_dir)
    _, summary = link_failure_study(
        cfg, out_root, modes=args.modes, p=args.p, seeds=args.seeds,
        episodes=args.episodes, link_failures=args.link_failures,
        workers=args.workers, progress=cfg.train.progress)
    print(summary.to_string(index=False))
    print(f'study tables written to {out_root}')
    return 0


def cmd_gradcheck(args):
    table = run_gradcheck_suite(seed=args.seed)
    print(table.to_string(index=False))
    if not table['passed'].all():
        failed = ', '.join(table.loc[~table['passed'], 'topology'])
        print(f'error: gradient check failed for {failed}', file=sys.stderr)
        return 1
    return 0


def cmd_pretrain_ae(args):
    if args.env != 'pursuit':
        raise ValueError(f'message compression for {args.env} not '
                         f'recognized')
    config = (PursuitConfig() if not args.config else
              load_config(args.config).env_config())
    samples = collect_pursuit_samples(config, args.samples, seed=args.seed)
    ae, history = pretrain(samples, epochs=args.epochs, seed=args.seed,
                           progress=True)
    directory = output_root(args.out) / 'autoencoder'
    ae.save(directory)
    print(f'autoencoder {ae.obs_dim}->{ae.code_dim} saved to {directory}, '
          f'final reconstruction mse {history[-1]:.6g}')
    return 0


def _add_config_args(parser):
    group = parser.add_mutually_exclusive_group(required=True)
    group.add_argument('--config', help='run configuration file')
    group.add_argument('--preset', help='shipped preset name')
    parser.add_argument('--out', default=None, help='output root')


def build_parser():
    parser = argparse.ArgumentParser(
        prog='msgdrop',
        description='Multi-agent deep RL with message-dropout')
    parser.add_argument('--version', action='version', version=__version__)
    parser.add_argument('--log-level', default='INFO')
    sub = parser.add_subparsers(dest='command', required=True)

    train = sub.add_parser('train', help='train one run')
    _add_config_args(train)
    train.add_argument('--seed', type=int, default=None)
    train.add_argument('--steps', type=int, default=None,
                       help='override train.total_steps')
    train.set_defaults(func=cmd_train)

    evl = sub.add_parser('eval', help='evaluate a trained run')
    evl.add_argument('--checkpoint-dir', required=True,
                     help='run directory or checkpoint directory')
    evl.add_argument('--episodes', type=int, default=50)
    evl.add_argument('--link-failure', default='none',
                     help='none, half, all or prob:q')
    evl.add_argument('--seed', type=int, default=0)
    evl.add_argument('--eps', type=float, default=0.)
    evl.set_defaults(func=cmd_eval)

    swp = sub.add_parser('sweep', help='train over dropout rates and seeds')
    _add_config_args(swp)
    swp.add_argument('--p', type=_float_list, required=True,
                     help='comma separated dropout rates')
    swp.add_argument('--seeds', type=int, default=5)
    swp.add_argument('--steps', type=int, default=None)
    swp.add_argument('--workers', type=int, default=1)
    swp.add_argument('--final-episodes', type=int, default=0,
                     help='dedicated evaluation episodes per final '
                          'checkpoint, 0 keeps the last periodic one')
    swp.add_argument('--link-failures', type=_name_list, default=['none'],
                     help='comma separated failures of the final '
                          'evaluation')
    swp.set_defaults(func=cmd_sweep)

    study = sub.add_parser('study',
                           help='compare modes under link failures')
    _add_config_args(study)
    study.add_argument('--modes', type=_name_list,
                       default=list(STUDY_MODES))
    study.add_argument('--p', type=float, default=0.2)
    study.add_argument('--seeds', type=int, default=5)
    study.add_argument('--steps', type=int, default=None)
    study.add_argument('--episodes', type=int, default=50)
    study.add_argument('--link-failures', type=_name_list,
                       default=list(STUDY_LINK_FAILURES))
    study.add_argument('--workers', type=int, default=1)
    study.set_defaults(func=cmd_study)

    grad = sub.add_parser('gradcheck', help='verify every backward pass')
    grad.add_argument('--seed', type=int, default=0)
    grad.set_defaults(func=cmd_gradcheck)

    ae = sub.add_parser('pretrain-ae', help='pretrain the message encoder')
    ae.add_argument('--env', default='pursuit')
    ae.add_argument('--samples', type=int, default=100_000)
    ae.add_argument('--epochs', type=int, default=10)
    ae.add_argument('--seed', type=int, default=0)
    ae.add_argument('--config', default=None,
                    help='run configuration providing the pursuit settings')
    ae.add_argument('--out', default=None, help='output root')
    ae.set_defaults(func=cmd_pretrain_ae)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level)
    try:
        return args.func(args)
    except Exception as err:
        log.debug('command failed', exc_info=True)
        print(f'error: {err}', file=sys.stderr)
        return 1
