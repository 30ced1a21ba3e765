"""Shared fixtures"""

import os

import pytest

from src.utils.config import reset_config


@pytest.fixture(autouse=True)
def clean_config(monkeypatch):
    """Run every test against default settings"""
    for key in list(os.environ):
        if key.startswith("PQS_"):
            monkeypatch.delenv(key)
    reset_config()
    yield
    reset_config()
