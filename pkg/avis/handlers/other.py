import argparse
import os

from avis.codec import Codec, KINDS
from avis.core import VIDEO_CHANNELS, Measurement, Video
from avis.data import SynthSpec, synth_blobs, read_vraw
from avis.database.methods import create_run, finish_run
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.misc.errors import AvisError, ParameterError, ShapeError
from avis.operators import TASKS, build_operator, measure
from avis.prior import GaussARPrior, LearnedPrior
from avis.sampler import MODES, RunConfig
from avis.utils.files import ensure_run_folder, write_manifest

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_EMPIRICAL_ONLY = 3


def open_unit_interval(value: str) -> float:
    t = float(value)
    if not 0.0 < t <= 1.0:
        raise argparse.ArgumentTypeError(f'{value} is not in (0, 1]')
    return t


def positive_int(value: str) -> int:
    n = int(value)
    if n < 1:
        raise argparse.ArgumentTypeError(f'{value} is not a positive integer')
    return n


def non_negative_float(value: str) -> float:
    x = float(value)
    if x < 0:
        raise argparse.ArgumentTypeError(f'{value} is negative')
    return x


def name_list(choices):
    def parse(value: str) -> list[str]:
        names = [v.strip() for v in value.split(',') if v.strip()]
        if not names:
            raise argparse.ArgumentTypeError('list is empty')
        unknown = [n for n in names if n not in choices]
        if unknown:
            raise argparse.ArgumentTypeError(f'unknown entries {unknown}, expected {choices}')
        return names
    return parse


def number_list(kind):
    def parse(value: str) -> list:
        items = [kind(v) for v in value.split(',') if v.strip()]
        if not items:
            raise argparse.ArgumentTypeError('list is empty')
        return items
    return parse


def add_geometry_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--frames', type=positive_int, default=None,
                        help='pixel frames; derived from --chunks when omitted')
    parser.add_argument('--height', type=positive_int, default=AvisConfig.HEIGHT)
    parser.add_argument('--width', type=positive_int, default=AvisConfig.WIDTH)
    parser.add_argument('--channels', type=int, choices=VIDEO_CHANNELS, default=AvisConfig.CHANNELS)


def add_operator_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--task', choices=TASKS, default='inpaint')
    parser.add_argument('--keep', type=open_unit_interval, default=AvisConfig.KEEP_FRACTION)
    parser.add_argument('--mask-seed', type=int, default=0)
    parser.add_argument('--shared-mask', action='store_true', help='one inpainting mask for every frame')
    parser.add_argument('--noise-sigma', type=non_negative_float, default=0.0)
    parser.add_argument('--full-scale', action='store_true', help='full-resolution operator presets')


def add_prior_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--prior', choices=('gauss', 'learned'), default='gauss')
    parser.add_argument('--prior-file', default=None, help='parameters written by train-prior')
    parser.add_argument('--rho', type=float, default=AvisConfig.RHO)
    parser.add_argument('--sigma-p', type=float, default=AvisConfig.SIGMA_P)
    parser.add_argument('--mu0', type=float, default=AvisConfig.MU0)
    parser.add_argument('--hidden', type=positive_int, default=AvisConfig.HIDDEN)


def add_sampling_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--t0', type=open_unit_interval, default=AvisConfig.T0)
    parser.add_argument('--steps', type=positive_int, default=AvisConfig.STEPS)
    parser.add_argument('--gamma', type=non_negative_float, default=AvisConfig.GAMMA)
    parser.add_argument('--cg-iters', type=positive_int, default=AvisConfig.GUIDANCE_CG_ITERS)
    parser.add_argument('--period', type=positive_int, default=AvisConfig.GUIDANCE_PERIOD)
    parser.add_argument('--chunk-len', type=positive_int, default=AvisConfig.CHUNK_LEN)
    parser.add_argument('--chunks', type=positive_int, default=3)
    parser.add_argument('--prerestore-iters', type=int, default=None)
    parser.add_argument('--no-context', action='store_true', help='evaluate the prior without its context cache')
    parser.add_argument('--codec', choices=KINDS, default='identity')
    parser.add_argument('--seed', type=int, default=0)
    add_prior_flags(parser)


def add_problem_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument('--input', default=None, help='.vraw measurement, or clean video with --degrade-first')
    parser.add_argument('--degrade-first', action='store_true')
    parser.add_argument('--reference', default=None, help='clean .vraw used for metrics')
    parser.add_argument('--mask', default=None, help='inpainting mask .vraw written by degrade')
    add_geometry_flags(parser)
    add_operator_flags(parser)
    add_sampling_flags(parser)


def build_codec(args) -> Codec:
    return Codec(args.codec)


def build_prior(args):
    if args.prior == 'gauss':
        return GaussARPrior(args.rho, args.sigma_p, args.mu0)
    if args.prior_file:
        prior = LearnedPrior.load(args.prior_file)
        if prior.chunk_len != args.chunk_len:
            raise ParameterError(f'{args.prior_file} was trained for chunk_len={prior.chunk_len}')
        return prior
    logger.warning('learned prior without --prior-file: using untrained parameters')
    return LearnedPrior(args.chunk_len, args.channels, args.hidden, seed=args.seed)


def run_config(args, **overrides) -> RunConfig:
    fields = dict(mode=getattr(args, 'mode', 'avis'), t0=args.t0, steps=args.steps, gamma=args.gamma,
                  guidance_iters=args.cg_iters, guidance_period=args.period, chunk_len=args.chunk_len,
                  seed=args.seed, prerestore_iters=args.prerestore_iters, use_context=not args.no_context)
    fields.update(overrides)
    return RunConfig(**fields)


def _operator(args, shape: tuple):
    mask = read_vraw(args.mask).data if getattr(args, 'mask', None) else None
    return build_operator(args.task, shape, keep=args.keep, mask_seed=args.mask_seed,
                          per_frame_mask=not args.shared_mask, mask=mask, full_scale=args.full_scale)


def operator_input_shape(args, measurement_shape: tuple) -> tuple:
    T, h, w, C = measurement_shape
    if args.task == 'sr4':
        f = AvisConfig.SR_FACTOR
    elif args.task == 'stavg':
        f = AvisConfig.STAVG_FACTOR
    else:
        f = 1
    return T, h * f, w * f, C


def write_operator_record(folder: str, op) -> str:
    path = os.path.join(folder, 'operator.txt')
    entries = {'kind': op.kind, 'input_shape': op.input_shape, 'output_shape': op.output_shape}
    entries.update(op.params())
    write_manifest(path, entries)
    return path


def check_frame_size(shape: tuple) -> None:
    """Restored frames are scored by SSIM, so they must hold its window."""
    size = AvisConfig.SSIM_WINDOW
    if shape[1] < size or shape[2] < size:
        raise ShapeError(f'{shape[1]}x{shape[2]} frames are smaller than the {size}x{size} SSIM window')


def load_problem(args, codec: Codec):
    """(clean video or None, operator, measurement, video id) from the problem flags."""
    if args.input and not args.degrade_first:
        y = Measurement(read_vraw(args.input).data, args.noise_sigma)
        shape = operator_input_shape(args, y.shape)
        check_frame_size(shape)
        op = _operator(args, shape)
        clean = read_vraw(args.reference) if args.reference else None
        return clean, op, y, os.path.splitext(os.path.basename(args.input))[0]
    if args.input:
        clean = read_vraw(args.input)
        video_id = os.path.splitext(os.path.basename(args.input))[0]
    else:
        frames = args.frames or codec.pixel_frames(args.chunks * args.chunk_len)
        clean = synth_blobs(SynthSpec('blobs', frames, args.height, args.width, args.channels, seed=args.seed))
        video_id = f'blobs_{args.seed}'
    check_frame_size(clean.shape)
    op = _operator(args, clean.shape)
    return clean, op, measure(op, clean, args.noise_sigma, args.seed), video_id


def execute(verb: str, args, body) -> int:
    """Run one verb inside its output folder with a manifest and a registry record.

    The manifest is written before any work with status=started and
    rewritten at the end with the final status and exit code.
    """
    folder = ensure_run_folder(args.out_dir, verb)
    manifest_path = os.path.join(folder, 'manifest.txt')
    entries = {'verb': verb, 'status': 'started'}
    entries.update({k: v for k, v in sorted(vars(args).items()) if k != 'handler'})
    write_manifest(manifest_path, entries)
    run_id = create_run(verb, folder, manifest_path)
    logger.info(f'{verb}: run {run_id} in {folder}')
    try:
        code = body(args, folder, run_id)
        entries['status'] = 'finished'
    except AvisError as e:
        logger.error(f'{verb} failed: {e}')
        code = EXIT_FAILED
        entries['status'] = 'failed'
    entries['exit_code'] = code
    write_manifest(manifest_path, entries)
    finish_run(run_id, code)
    return code
