from avis.codec.main import Codec, PassCounter, encode, decode, read_counters, KINDS, BUCKETS
