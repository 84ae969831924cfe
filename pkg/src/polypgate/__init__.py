"""Integer-only polyp frame gating for capsule endoscopy streams."""

from .edges import DirectionalEdgeMaps, EdgeConfig, compute_edges, edge_census
from .errors import (
    BoundsError,
    ConfigError,
    DimensionOverflowError,
    EvaluationError,
    ImageFormatError,
    LabelsError,
    PolypGateError,
)
from .evaluation import (
    ConfusionMatrix,
    LabeledSet,
    PhantomSpec,
    evaluate,
    generate_phantom,
    load_labels,
    phantom_suite,
)
from .fusion import FusionOutput, fuse
from .image_core import IntegralImage, Rect, integral, rect_sum, to_intensity, window_sum
from .pcm import PcmConfig, compute_pcm
from .pipeline import Decision, DetectionReport, PipelineConfig, detect_frame, detect_gray
from .stream_sim import StreamStats, run_stream

__version__ = "0.1.0"
