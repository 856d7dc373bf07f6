"""Versioned stacky-fan fixtures for the verification suite.

The eight standard inputs live as JSON files next to this module; the
environment variable ``TORCC_FIXTURES`` overrides the directory, which the
CLI honors as well.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .fans import StackyFan

FIXTURE_ENV = "TORCC_FIXTURES"

SUITE_NAMES = (
    "a1",
    "a2",
    "c2z2",
    "p1",
    "p1x2",
    "p2",
    "p1xp1",
    "p112",
)


def fixture_dir() -> Path:
    override = os.environ.get(FIXTURE_ENV)
    if override:
        return Path(override)
    return Path(__file__).resolve().parent / "fixtures"


def load_fixture_dict(name: str) -> dict:
    path = fixture_dir() / (name + ".json")
    if not path.exists():
        raise FileNotFoundError("no fixture named %r in %s" % (name, fixture_dir()))
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_stacky_fan(name: str) -> StackyFan:
    return StackyFan.from_json_dict(load_fixture_dict(name))


def load_suite() -> dict[str, StackyFan]:
    return {name: load_stacky_fan(name) for name in SUITE_NAMES}
