"""Exact and numeric checks of energy-functional degeneracy on hyperelliptic curves."""

from __future__ import annotations

__version__ = "0.1.0"
