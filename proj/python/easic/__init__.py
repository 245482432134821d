"""LUT obfuscation flow for structured ASICs."""

from ._easic import *  # noqa: F401,F403
from ._easic import EasicError, __doc__  # noqa: F401

__version__ = "0.1.0"
