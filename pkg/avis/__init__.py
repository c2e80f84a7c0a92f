from avis.main import start_cli
