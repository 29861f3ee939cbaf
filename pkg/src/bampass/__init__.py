"""Bidirectional associative memory with deterministic password encoders.

Pattern pairs are stored by outer-product superposition in one integer
weight matrix; recall bounces between the two layers until a fixed point.
On top of the engine: text/image encoders, an enroll/verify/reverse-lookup
credential store, and a seeded capacity benchmark harness.
"""

from .bam import (
    BamMemory,
    PatternPair,
    RecallOptions,
    RecallResult,
    add_pair,
    encode,
    energy,
    enumerate_fixed_points,
    is_fixed_point,
    recall,
    recall_from_b,
    remove_pair,
    sign_threshold,
)
from .core import (
    binary_to_bipolar,
    bipolar_to_binary,
    hamming_distance,
    outer_product,
    row_times_matrix,
    transpose,
)
from .encoders import (
    ImageEncodingConfig,
    RgbMatrix,
    TextEncodingConfig,
    decode_text,
    encode_image,
    encode_text,
    image_to_rgb_matrix,
    rgb_to_binary,
)
from .authstore import (
    CredentialStore,
    ReverseLookupOutcome,
    VerifyOutcome,
    create_store,
    de_enroll,
    enroll,
    reverse_lookup,
    verify,
)
from .bench import BenchConfig, BenchRow, run_capacity_bench, rows_to_csv

__version__ = "0.1.0"
