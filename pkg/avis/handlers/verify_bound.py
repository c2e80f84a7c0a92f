import os

from avis.bound import lipschitz_empirical, sweep_bound, t0_sensitivity, write_bound_csv
from avis.core import make_schedule
from avis.database.methods import add_bound_results
from avis.handlers.other import EXIT_EMPIRICAL_ONLY, EXIT_FAILED, EXIT_OK, add_prior_flags, build_prior, \
    execute, open_unit_interval, positive_int, number_list
from avis.logger_mesh import logger
from avis.misc import AvisConfig


def verify_bound(args, folder: str, run_id: int) -> int:
    schedule = make_schedule(args.t0, args.steps)
    prior = build_prior(args)
    chunk_shape = (args.chunk_len, args.height, args.width, args.channels)
    if not prior.analytic:
        L_z, L_c = lipschitz_empirical(prior, schedule, args.trials, chunk_shape, seed=args.seed)
        logger.warning(f'empirical-lower-bound only: learned prior L_z >= {max(L_z):.4f}, L_c >= {max(L_c):.4f}')
        print('empirical-lower-bound only')
        return EXIT_EMPIRICAL_ONLY

    reports = sweep_bound(prior, schedule, args.seeds, chunk_shape, base_seed=args.seed)
    write_bound_csv(reports, os.path.join(folder, 'bound.csv'))
    add_bound_results(run_id, reports)
    with open(os.path.join(folder, 't0_sensitivity.csv'), 'w') as f:
        f.write('t0,Lambda_K,B_K\n')
        for t0, Lambda, B in t0_sensitivity(args.t0_sweep, args.steps, prior=prior):
            f.write(f'{t0},{Lambda},{B}\n')

    worst = min(reports, key=lambda r: r.slack)
    print(f'worst slack {worst.slack:.3e} (seed {worst.seed})')
    failed = [r.seed for r in reports if not r.satisfied]
    if failed:
        logger.warning(f'bound violated for seeds {failed}')
        print(f'bound violated, first offending seed {failed[0]}')
        return EXIT_FAILED
    return EXIT_OK


def register_verify_bound_handlers(subparsers) -> None:
    parser = subparsers.add_parser('verify-bound', help='check the chunk error bound on coupled trajectories')
    parser.add_argument('--seeds', type=positive_int, default=AvisConfig.BOUND_SEEDS)
    parser.add_argument('--seed', type=int, default=0)
    parser.add_argument('--t0', type=open_unit_interval, default=AvisConfig.T0)
    parser.add_argument('--steps', type=positive_int, default=AvisConfig.STEPS)
    parser.add_argument('--t0-sweep', type=number_list(open_unit_interval), default=[0.1, 0.2, 0.5])
    parser.add_argument('--trials', type=positive_int, default=AvisConfig.LIPSCHITZ_TRIALS)
    parser.add_argument('--chunk-len', type=positive_int, default=AvisConfig.CHUNK_LEN)
    parser.add_argument('--height', type=positive_int, default=8)
    parser.add_argument('--width', type=positive_int, default=8)
    parser.add_argument('--channels', type=positive_int, default=AvisConfig.CHANNELS)
    add_prior_flags(parser)
    parser.set_defaults(handler=lambda args: execute('verify-bound', args, verify_bound))
