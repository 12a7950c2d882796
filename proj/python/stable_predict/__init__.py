"""Uniformly stable and differentially private prediction for finite-VC classes.

Thin wrapper over the C++ core; the heavy lifting (exact enumeration,
certificates, experiments) lives in `stable_predict._core`.
"""

from ._core import *  # noqa: F401,F403
from ._core import __all__ as _core_all  # noqa: F401

__all__ = list(_core_all)
