import os

from avis.analysis import metrics_row, write_metrics_csv
from avis.data import export_frames, write_vraw
from avis.database.methods import add_metrics_row
from avis.handlers.other import EXIT_OK, add_problem_flags, build_codec, build_prior, execute, load_problem, \
    run_config, write_operator_record
from avis.logger_mesh import logger
from avis.sampler import MODES, run_mode, write_trace_csv


def restore(args, folder: str, run_id: int) -> int:
    codec = build_codec(args)
    clean, op, y, video_id = load_problem(args, codec)
    prior = build_prior(args)
    _, trace = run_mode(run_config(args), op, y, prior, codec)
    restored = trace.video()

    write_vraw(restored, os.path.join(folder, 'restored.vraw'))
    write_trace_csv(trace, os.path.join(folder, 'trace.csv'))
    write_operator_record(folder, op)
    if args.export_frames:
        export_frames(restored, os.path.join(folder, 'frames'))
    if clean is not None:
        row = metrics_row(video_id, args.task, args.mode, restored, clean, trace)
        write_metrics_csv([row], os.path.join(folder, 'metrics.csv'))
        add_metrics_row(run_id, row)
        logger.info(f'restore {video_id}: PSNR {row.psnr_db:.2f} dB, SSIM {row.ssim:.4f}, '
                    f'first display after {row.latency_steps} steps')
    return EXIT_OK


def register_restore_handlers(subparsers) -> None:
    parser = subparsers.add_parser('restore', help='restore a degraded video chunk by chunk')
    parser.add_argument('--mode', choices=MODES, default='avis')
    parser.add_argument('--export-frames', action='store_true')
    add_problem_flags(parser)
    parser.set_defaults(handler=lambda args: execute('restore', args, restore))
