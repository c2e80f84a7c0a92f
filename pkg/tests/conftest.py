import os
import tempfile

os.environ['AVIS_DATABASE_URL'] = 'sqlite://'
os.environ.setdefault('AVIS_LOG_FILE', os.path.join(tempfile.gettempdir(), 'avis-tests.log'))

import numpy as np
import pytest

from avis.core import NoiseStream
from avis.data import SynthSpec, synth_blobs, synth_gauss_ar1
from avis.database import Database
from avis.database.models import register_models
from avis.prior import GaussARPrior


@pytest.fixture
def registry():
    Database.drop()
    Database('sqlite://')
    register_models()
    yield Database()
    Database().session.close()
    Database.drop()


@pytest.fixture
def stream():
    return NoiseStream('test', 1234)


@pytest.fixture
def blobs():
    return synth_blobs(SynthSpec('blobs', frames=9, height=32, width=32, seed=3))


@pytest.fixture
def gauss_prior():
    return GaussARPrior(rho=0.9, sigma_p=1.0, mu0=0.0)


def gauss_sequence(seed: int, chunks: int = 3, chunk_len: int = 3, height: int = 16, width: int = 16):
    spec = SynthSpec('gauss_ar1', frames=chunks * chunk_len, height=height, width=width, seed=seed)
    return synth_gauss_ar1(spec, chunk_len)


def random_array(shape, seed: int = 0) -> np.ndarray:
    return NoiseStream('fixture', seed).normal(shape)
