import csv
import os
from dataclasses import asdict

from avis.analysis import COLUMNS, metrics_row
from avis.database.methods import add_metrics_row
from avis.handlers.other import EXIT_OK, add_problem_flags, build_codec, build_prior, execute, load_problem, \
    name_list, run_config
from avis.logger_mesh import logger
from avis.sampler import MODES, run_mode


def bench(args, folder: str, run_id: int) -> int:
    rows = []
    for mode in args.modes:
        codec = build_codec(args)
        clean, op, y, video_id = load_problem(args, codec)
        _, trace = run_mode(run_config(args, mode=mode), op, y, build_prior(args), codec)
        row = metrics_row(video_id, args.task, mode, trace.video(), clean if clean is not None else trace.video(),
                          trace)
        add_metrics_row(run_id, row)
        rows.append(row)
        logger.info(f'bench {mode}: latency {row.latency_steps} steps, {row.guidance_calls} guidance calls, '
                    f'{row.wall_ms:.1f} ms')

    avis_passes = next((r.guidance_encodes + r.guidance_decodes for r in rows if r.mode == 'avis'), None)
    with open(os.path.join(folder, 'bench.csv'), 'w', newline='') as f:
        writer = csv.DictWriter(f, fieldnames=COLUMNS + ['guidance_pass_ratio'])
        writer.writeheader()
        for row in rows:
            ratio = ''
            if avis_passes:
                ratio = (row.guidance_encodes + row.guidance_decodes) / avis_passes
            writer.writerow(asdict(row) | {'guidance_pass_ratio': ratio})
    return EXIT_OK


def register_bench_handlers(subparsers) -> None:
    parser = subparsers.add_parser('bench', help='compare sampling modes on the same input')
    parser.add_argument('--modes', type=name_list(MODES), default=['avis', 'flash', 'joint'])
    add_problem_flags(parser)
    parser.set_defaults(handler=lambda args: execute('bench', args, bench), task='sr4')
