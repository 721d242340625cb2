"""Signal synthesis: modulations, waveforms, channels, and dataset files."""

from .channel import NO_NOISE, GridSnr, IQFrame, NodeChannel, SnrPolicy, SpreadSnr, apply_channel
from .datafile import (
    DatasetHeader,
    GenerationConfig,
    StoredDataset,
    StoredSample,
    config_fingerprint,
    dataset_paths,
    generate_dataset,
    load_dataset_arrays,
    read_dataset,
    sidecar_path,
)
from .modulations import (
    ALL_MODULATIONS,
    CLASS_COUNT,
    CONSTELLATIONS,
    Family,
    ModulationType,
    fsk_tones,
    map_symbols,
)
from .sampling import CooperativeSample, generate_cooperative_sample
from .waveform import FrameSpec, TransmitRealization, raised_cosine_taps, synthesize_baseband

__all__ = [
    "ALL_MODULATIONS",
    "CLASS_COUNT",
    "CONSTELLATIONS",
    "CooperativeSample",
    "DatasetHeader",
    "Family",
    "FrameSpec",
    "GenerationConfig",
    "GridSnr",
    "IQFrame",
    "ModulationType",
    "NO_NOISE",
    "NodeChannel",
    "SnrPolicy",
    "SpreadSnr",
    "StoredDataset",
    "StoredSample",
    "TransmitRealization",
    "apply_channel",
    "config_fingerprint",
    "dataset_paths",
    "fsk_tones",
    "generate_cooperative_sample",
    "generate_dataset",
    "load_dataset_arrays",
    "map_symbols",
    "raised_cosine_taps",
    "read_dataset",
    "sidecar_path",
    "synthesize_baseband",
]
