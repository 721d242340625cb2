"""coopsig: cooperative radio modulation classification at desk scale.

Subpackages:
    sigsynth     -- modulation/waveform/channel synthesis and dataset files
    nn           -- minimal deterministic 1-D CNN engine (forward/backward/SGD)
    models       -- CNN1/CNN2/CNN3 builders, feature extraction, serialization
    fusion       -- decision/signal/feature fusion schemes, PCA baseline, overhead
    experiments  -- dataset/training/evaluation orchestration and reports
"""

__version__ = "0.1.0"
