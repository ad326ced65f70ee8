"""
Tests for logging helpers
"""

import logging
from unittest.mock import patch

import pytest

from utils.core.log import KeywordAdapter, configure_logging, get_logger


class TestStdlibFallback:
    """Test the logger handed out when structlog is unavailable."""

    @patch("utils.core.log.structlog", None)
    def test_returns_keyword_adapter(self):
        assert isinstance(get_logger("cavity.fallback"), KeywordAdapter)

    @patch("utils.core.log.structlog", None)
    def test_keyword_context_folded_into_message(self, caplog):
        logger = get_logger("cavity.fallback")
        with caplog.at_level(logging.WARNING, logger="cavity.fallback"):
            logger.warning("non_adiabatic_transit", leakage=0.2, bound=0.1)
        assert "non_adiabatic_transit leakage=0.2 bound=0.1" in caplog.text

    @patch("utils.core.log.structlog", None)
    def test_plain_event(self, caplog):
        logger = get_logger("cavity.fallback")
        with caplog.at_level(logging.INFO, logger="cavity.fallback"):
            logger.info("map_written")
        assert caplog.records[-1].getMessage() == "map_written"

    @patch("utils.core.log.structlog", None)
    def test_exc_info_still_honoured(self, caplog):
        logger = get_logger("cavity.fallback")
        with caplog.at_level(logging.ERROR, logger="cavity.fallback"):
            try:
                raise RuntimeError("boom")
            except RuntimeError:
                logger.error("numerical_failure", exc_info=True, command="trajectory")
        record = caplog.records[-1]
        assert record.exc_info is not None
        assert record.getMessage() == "numerical_failure command='trajectory'"

    @patch("utils.core.log.structlog", None)
    def test_configure_without_structlog(self):
        configure_logging("INFO")


class TestConfigureLogging:
    """Test level handling."""

    def test_unknown_level(self):
        with pytest.raises(ValueError, match="Unsupported log level"):
            configure_logging("CHATTY")
