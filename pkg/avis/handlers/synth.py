import os

from avis.core import Video
from avis.data import SynthSpec, export_frames, read_vraw, synth_blobs, synth_gauss_ar1, write_vraw
from avis.handlers.other import EXIT_OK, add_geometry_flags, add_operator_flags, execute, positive_int, \
    write_operator_record
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.operators import build_operator, measure


def synth(args, folder: str, run_id: int) -> int:
    frames = args.frames or AvisConfig.FRAMES_IDENTITY
    spec = SynthSpec(args.kind, frames, args.height, args.width, args.channels, seed=args.seed,
                     rho=args.rho, sigma_p=args.sigma_p)
    if args.kind == 'blobs':
        video = synth_blobs(spec)
    else:
        video = Video(synth_gauss_ar1(spec, args.chunk_len).data)
    path = os.path.join(folder, 'clean.vraw')
    write_vraw(video, path)
    if args.export_frames:
        export_frames(video, os.path.join(folder, 'frames'))
    logger.info(f'synth: {args.kind} {video.shape} -> {path}')
    return EXIT_OK


def degrade(args, folder: str, run_id: int) -> int:
    clean = read_vraw(args.input)
    op = build_operator(args.task, clean.shape, keep=args.keep, mask_seed=args.mask_seed,
                        per_frame_mask=not args.shared_mask, full_scale=args.full_scale)
    y = measure(op, clean, args.noise_sigma, args.seed)
    write_vraw(Video(y.payload), os.path.join(folder, 'measurement.vraw'))
    if args.task == 'inpaint':
        write_vraw(Video(op.mask), os.path.join(folder, 'mask.vraw'))
    write_operator_record(folder, op)
    logger.info(f'degrade: {args.task} {clean.shape} -> {y.shape}')
    return EXIT_OK


def register_synth_handlers(subparsers) -> None:
    parser = subparsers.add_parser('synth', help='write a synthetic clean video')
    parser.add_argument('--kind', choices=('blobs', 'gauss_ar1'), default='blobs')
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--chunk-len', type=positive_int, default=AvisConfig.CHUNK_LEN)
    parser.add_argument('--rho', type=float, default=AvisConfig.RHO)
    parser.add_argument('--sigma-p', type=float, default=AvisConfig.SIGMA_P)
    parser.add_argument('--export-frames', action='store_true')
    add_geometry_flags(parser)
    parser.set_defaults(handler=lambda args: execute('synth', args, synth))

    parser = subparsers.add_parser('degrade', help='apply a degradation operator to a clean video')
    parser.add_argument('--input', required=True)
    parser.add_argument('--seed', type=int, default=0)
    add_operator_flags(parser)
    parser.set_defaults(handler=lambda args: execute('degrade', args, degrade))
