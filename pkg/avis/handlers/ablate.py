import csv
import os

from avis.analysis import psnr, ssim
from avis.handlers.other import EXIT_OK, add_problem_flags, build_codec, build_prior, execute, load_problem, \
    number_list, open_unit_interval, positive_int, run_config
from avis.logger_mesh import logger
from avis.sampler import MODES, run_mode


def _settings(args):
    yield 'base', args.t0, args.steps, True
    for t0 in args.t0_list:
        yield 't0', t0, args.steps, True
    for steps in args.steps_list:
        yield 'steps', args.t0, steps, True
    yield 'no_context', args.t0, args.steps, False


def ablate(args, folder: str, run_id: int) -> int:
    clean, op, y, _ = load_problem(args, build_codec(args))
    rows = []
    for name, t0, steps, use_context in _settings(args):
        cfg = run_config(args, mode=args.mode, t0=t0, steps=steps, use_context=use_context)
        _, trace = run_mode(cfg, op, y, build_prior(args), build_codec(args))
        restored = trace.video()
        value_psnr = psnr(restored, clean) if clean is not None else float('nan')
        value_ssim = ssim(restored, clean) if clean is not None else float('nan')
        rows.append([name, t0, steps, int(use_context), value_psnr, value_ssim, trace.reverse_steps])
        logger.info(f'ablate {name}: t0={t0} K={steps} context={use_context} PSNR {value_psnr:.2f} dB')

    with open(os.path.join(folder, 'ablation.csv'), 'w', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(['setting', 't0', 'steps', 'use_context', 'psnr_db', 'ssim', 'reverse_steps'])
        writer.writerows(rows)
    return EXIT_OK


def register_ablate_handlers(subparsers) -> None:
    parser = subparsers.add_parser('ablate', help='sweep start time, step count and context cache')
    parser.add_argument('--mode', default='flash', choices=MODES)
    parser.add_argument('--t0-list', type=number_list(open_unit_interval), default=[0.05, 0.2, 0.3])
    parser.add_argument('--steps-list', type=number_list(positive_int), default=[1, 3, 4])
    add_problem_flags(parser)
    parser.set_defaults(handler=lambda args: execute('ablate', args, ablate))
