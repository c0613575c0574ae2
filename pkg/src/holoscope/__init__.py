"""holoscope: exact analysis of balanced multisums and holonomic sequences."""

__version__ = "0.1.0"
