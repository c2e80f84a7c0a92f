from avis.core.types import VIDEO_CHANNELS, Video, LatentSeq, Chunk, Schedule, Measurement, make_schedule, split_chunks, merge_chunks
from avis.core.noise import NoiseStream, gaussian_draw, init_stream, renoise_stream
