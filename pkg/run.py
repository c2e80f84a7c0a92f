import importlib
import subprocess
import sys

# import name -> requirements.txt entry
REQUIRED_MODULES = {
    "numpy": "numpy",
    "scipy": "scipy",
    "sqlalchemy": "SQLAlchemy",
    "alembic": "alembic",
    "dotenv": "python-dotenv",
}


def ensure_requirements() -> None:
    """Install requirements.txt if any runtime import is missing."""
    missing = []
    for module, package in REQUIRED_MODULES.items():
        try:
            importlib.import_module(module)
        except ImportError:
            missing.append(package)

    if missing:
        print(f"missing {', '.join(missing)}, installing requirements.txt", file=sys.stderr)
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", "requirements.txt"])


if __name__ == '__main__':
    ensure_requirements()

    from avis import start_cli

    sys.exit(start_cli())
