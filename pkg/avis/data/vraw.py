import os

import numpy as np

from avis.core import Video
from avis.misc.errors import VrawFormatError, VrawTruncatedError

MAGIC = b'VRAW1'
MAX_SAMPLES = 1 << 34
_LE_F32 = np.dtype('<f4')


def write_vraw(v: Video, path) -> str:
    T, H, W, C = v.shape
    with open(path, 'wb') as fh:
        fh.write(MAGIC + b'\n')
        fh.write(f'{T} {H} {W} {C} f32 LE\n'.encode('ascii'))
        fh.write(v.data.astype(_LE_F32).tobytes(order='C'))
    return str(path)


def _parse_header(line: bytes) -> tuple:
    try:
        fields = line.decode('ascii').split()
    except UnicodeDecodeError as exc:
        raise VrawFormatError('header is not ASCII') from exc
    if len(fields) != 6 or fields[4:] != ['f32', 'LE']:
        raise VrawFormatError(f'bad header line {line!r}')
    try:
        dims = tuple(int(f) for f in fields[:4])
    except ValueError as exc:
        raise VrawFormatError(f'non-integer dimension in {line!r}') from exc
    if any(d <= 0 for d in dims):
        raise VrawFormatError(f'dimensions must be positive, got {dims}')
    if int(np.prod(dims, dtype=object)) > MAX_SAMPLES:
        raise VrawFormatError(f'dimensions {dims} overflow the sample limit')
    return dims


def read_vraw(path) -> Video:
    with open(path, 'rb') as fh:
        magic = fh.readline().rstrip(b'\n')
        if magic != MAGIC:
            raise VrawFormatError(f'{path}: bad magic {magic!r}')
        dims = _parse_header(fh.readline().rstrip(b'\n'))
        expected = int(np.prod(dims)) * _LE_F32.itemsize
        payload = fh.read(expected)
    if len(payload) < expected:
        raise VrawTruncatedError(f'{path}: payload has {len(payload)} of {expected} bytes')
    data = np.frombuffer(payload, dtype=_LE_F32).reshape(dims).astype(np.float64)
    return Video(data)


def _to_bytes(frame: np.ndarray) -> np.ndarray:
    # round half up
    return np.floor(np.clip(frame, 0.0, 1.0) * 255.0 + 0.5).astype(np.uint8)


def export_frames(v: Video, directory) -> list[str]:
    os.makedirs(directory, exist_ok=True)
    magic, ext = (b'P5', 'pgm') if v.channels == 1 else (b'P6', 'ppm')
    written = []
    for t in range(v.frames):
        path = os.path.join(directory, f'frame_{t:05d}.{ext}')
        with open(path, 'wb') as fh:
            fh.write(magic + f'\n{v.width} {v.height}\n255\n'.encode('ascii'))
            fh.write(_to_bytes(v.data[t]).tobytes(order='C'))
        written.append(path)
    return written
