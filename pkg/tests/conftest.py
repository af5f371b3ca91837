import logging

import pytest

from src.hgspec.algebra import PRODUCT_CACHE
from src.hgspec.session import HGSession


@pytest.fixture
def session():
    """Quiet session: live mode, logger that does not propagate to the console."""
    logger = logging.getLogger("hgspec.tests")
    logger.propagate = False
    return HGSession(logger, mode="live")


@pytest.fixture
def in_tmp(tmp_path, monkeypatch):
    """Run with cwd in a scratch dir so log files and runs/ land there."""
    monkeypatch.chdir(tmp_path)
    return tmp_path


@pytest.fixture(autouse=True)
def _fresh_product_cache():
    PRODUCT_CACHE.clear()
    yield
    PRODUCT_CACHE.clear()
