"""Compressed static functions with bound-driven pre-filter selection.

The heavy lifting lives in the `_autocsf` extension module; this package
re-exports its surface.
"""

from autocsf._autocsf import (
    AutoIndex,
    FilterSpec,
    InvalidArgumentError,
    ParseError,
    UnsolvableSystemError,
    __version__,
    build_auto,
    build_bcsf,
    build_plain,
    decide,
    delta_for,
    enumerate_all_specs,
    gen_synthetic,
    load_kmer_table,
    lower_bound,
    measured_savings,
    pack_kmer,
    upper_bound,
)

__all__ = [
    "AutoIndex",
    "FilterSpec",
    "InvalidArgumentError",
    "ParseError",
    "UnsolvableSystemError",
    "__version__",
    "build_auto",
    "build_bcsf",
    "build_plain",
    "decide",
    "delta_for",
    "enumerate_all_specs",
    "gen_synthetic",
    "load_kmer_table",
    "lower_bound",
    "measured_savings",
    "pack_kmer",
    "upper_bound",
]
