from avis.data.synth import SynthSpec, synth_blobs, synth_gauss_ar1
from avis.data.vraw import write_vraw, read_vraw, export_frames
