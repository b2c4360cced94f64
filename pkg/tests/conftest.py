from __future__ import annotations

import os

import pytest

from haltlab import config


@pytest.fixture(autouse=True)
def reset_settings(monkeypatch):
    """Each test starts from default settings without HALTLAB_ overrides."""

    monkeypatch.setattr(config, "_settings", None)
    for key in list(os.environ):
        if key.startswith("HALTLAB_"):
            monkeypatch.delenv(key, raising=False)
    yield
