"""Sliding-window BP-OSD decoding laboratory for quantum LDPC codes."""

__version__ = "0.1.0"
