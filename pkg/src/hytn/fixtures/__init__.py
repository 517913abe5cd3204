"""Bundled example instances."""

from __future__ import annotations

from importlib import resources
from pathlib import Path

from ..formats import parse_hytn
from ..model import HyTN


def workflow_join_path() -> Path:
    """Filesystem path of the bundled workflow-join instance."""
    return Path(resources.files(__package__) / "workflow_join.hytn")


def workflow_join() -> HyTN:
    """Eight-timepoint workflow excerpt whose join is one multi-head arc."""
    return parse_hytn(workflow_join_path().read_text())
