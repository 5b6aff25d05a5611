"""Exact rational-function kernel and a replayable proof-verification suite for a Cremona involution."""

from loguru import logger

__version__ = "0.1.0"

# Library records stay off until an entry point configures a sink.
logger.disable(__name__)
