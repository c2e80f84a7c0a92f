import argparse

from avis.database.models import register_models
from avis.handlers import register_all_handlers
from avis.logger_mesh import logger, file_handler
from avis.misc import EnvKeys


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog='avis', description='Streaming zero-shot video restoration')
    parser.add_argument('--out-dir', default=EnvKeys.OUTPUT_DIR, help='root folder for run outputs')
    subparsers = parser.add_subparsers(dest='verb', required=True)
    register_all_handlers(subparsers)
    return parser


def start_cli(argv: list[str] | None = None) -> int:
    if file_handler not in logger.handlers:
        logger.addHandler(file_handler)
    args = build_parser().parse_args(argv)
    register_models()
    return args.handler(args)
