"""Capacity and power simulator for multi-layer 4G/5G/6G networks in the upper mid-band."""

__version__ = "0.1.0"
