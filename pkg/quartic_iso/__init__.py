"""
quartic-iso - exact arithmetic for the simplest quartic fields K_n
"""

from quartic_iso.__version__ import __version__

__all__ = ["__version__"]
