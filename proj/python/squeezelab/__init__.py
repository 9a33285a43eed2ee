"""Cavity-feedback spin squeezing models."""

from ._core import *  # noqa: F401,F403
from ._core import inf

__all__ = [name for name in dir() if not name.startswith("_")]
