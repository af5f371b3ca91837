# src/hgspec/context.py
from dataclasses import dataclass
import logging

from .session import HGSession
from .run_reader import RunReader


@dataclass
class AppContext:
    logger: logging.Logger
    session: HGSession
    reader: RunReader
