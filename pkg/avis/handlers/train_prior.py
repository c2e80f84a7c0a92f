import os

from avis.core import NoiseStream
from avis.data import SynthSpec, synth_gauss_ar1
from avis.handlers.other import EXIT_OK, execute, non_negative_float, positive_int
from avis.logger_mesh import logger
from avis.misc import AvisConfig
from avis.prior import LearnedPrior, build_training_pairs, draw_cfm_batch, denoising_error, train


def train_prior(args, folder: str, run_id: int) -> int:
    frames = args.chunks * args.chunk_len
    sequences = [synth_gauss_ar1(SynthSpec('gauss_ar1', frames, args.height, args.width, args.channels,
                                           seed=args.seed + i, rho=args.rho, sigma_p=args.sigma_p),
                                 args.chunk_len)
                 for i in range(args.sequences)]
    prior = LearnedPrior(args.chunk_len, args.channels, args.hidden, seed=args.seed)
    pairs = build_training_pairs(prior, sequences)
    trained, history = train(prior, pairs, epochs=args.epochs, batch_size=args.batch_size,
                             learning_rate=args.lr, seed=args.seed)

    held_out = build_training_pairs(prior, [synth_gauss_ar1(
        SynthSpec('gauss_ar1', frames, args.height, args.width, args.channels, seed=args.seed + args.sequences,
                  rho=args.rho, sigma_p=args.sigma_p), args.chunk_len)])
    batch = draw_cfm_batch(held_out, NoiseStream('heldout', args.seed))
    before, after = denoising_error(prior, batch), denoising_error(trained, batch)
    logger.info(f'train-prior: held-out denoising error {before:.4f} -> {after:.4f}')

    trained.save(os.path.join(folder, 'prior.lprior'))
    with open(os.path.join(folder, 'loss.csv'), 'w') as f:
        f.write('epoch,loss\n')
        for epoch, loss in enumerate(history, start=1):
            f.write(f'{epoch},{loss}\n')
    return EXIT_OK


def register_train_prior_handlers(subparsers) -> None:
    parser = subparsers.add_parser('train-prior', help='fit the learned prior with the CFM objective')
    parser.add_argument('--sequences', type=positive_int, default=32)
    parser.add_argument('--chunks', type=positive_int, default=3)
    parser.add_argument('--chunk-len', type=positive_int, default=AvisConfig.CHUNK_LEN)
    parser.add_argument('--height', type=positive_int, default=8)
    parser.add_argument('--width', type=positive_int, default=8)
    parser.add_argument('--channels', type=positive_int, default=AvisConfig.CHANNELS)
    parser.add_argument('--rho', type=float, default=AvisConfig.RHO)
    parser.add_argument('--sigma-p', type=float, default=AvisConfig.SIGMA_P)
    parser.add_argument('--hidden', type=positive_int, default=AvisConfig.HIDDEN)
    parser.add_argument('--epochs', type=positive_int, default=AvisConfig.EPOCHS)
    parser.add_argument('--batch-size', type=positive_int, default=AvisConfig.BATCH_SIZE)
    parser.add_argument('--lr', type=non_negative_float, default=AvisConfig.LEARNING_RATE)
    parser.add_argument('--seed', type=int, default=0)
    parser.set_defaults(handler=lambda args: execute('train-prior', args, train_prior))
