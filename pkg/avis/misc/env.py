import os
from abc import ABC
from typing import Final
from dotenv import load_dotenv

load_dotenv()


class EnvKeys(ABC):
    DATABASE_URL: Final = os.environ.get('AVIS_DATABASE_URL', 'sqlite:///avis_runs.db')
    LOG_FILE: Final = os.environ.get('AVIS_LOG_FILE', 'avis.log')
    OUTPUT_DIR: Final = os.environ.get('AVIS_OUTPUT_DIR', 'runs')
