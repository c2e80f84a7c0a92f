import os

from avis.analysis import psnr, ssim
from avis.data import read_vraw
from avis.handlers.other import EXIT_OK, execute


def compare(args, folder: str, run_id: int) -> int:
    restored, reference = read_vraw(args.restored), read_vraw(args.reference)
    value_psnr, value_ssim = psnr(restored, reference), ssim(restored, reference)
    with open(os.path.join(folder, 'metrics.csv'), 'w') as f:
        f.write('restored,reference,psnr_db,ssim\n')
        f.write(f'{args.restored},{args.reference},{value_psnr},{value_ssim}\n')
    print(f'PSNR {value_psnr:.2f} dB, SSIM {value_ssim:.4f}')
    return EXIT_OK


def register_metrics_handlers(subparsers) -> None:
    parser = subparsers.add_parser('metrics', help='PSNR and SSIM of a restored video against a reference')
    parser.add_argument('--restored', required=True)
    parser.add_argument('--reference', required=True)
    parser.set_defaults(handler=lambda args: execute('metrics', args, compare))
