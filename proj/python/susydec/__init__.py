"""SUSY quantum mechanics decoherence simulator."""

try:
    from ._core import *  # noqa: F401,F403
except ImportError:  # built in-tree without the package layout
    from _core import *  # noqa: F401,F403

__version__ = "0.1.0"
