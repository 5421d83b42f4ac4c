"""Deterministic multi-agent indoor exploration simulator."""

try:
    from swarmsim._core import *  # noqa: F401,F403
except ImportError:
    # development layout: _core sits on PYTHONPATH in the cmake build tree
    from _core import *  # noqa: F401,F403
