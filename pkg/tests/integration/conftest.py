# Copyright 2025 The holim-connectivity authors
# See LICENSE file for licensing details.

"""Integration test fixtures and configuration."""

import os
import subprocess
import sys
from collections.abc import Callable
from pathlib import Path

from pytest import fixture

ROOT = Path(__file__).parents[2]


@fixture(scope="module")
def samples() -> Path:
    """Directory of the sample documents."""
    return ROOT / "samples"


@fixture(scope="module")
def holimcheck() -> Callable[..., subprocess.CompletedProcess]:
    """Run the command line in a fresh interpreter, as an installed script would."""

    def run(*argv: str) -> subprocess.CompletedProcess:
        env = dict(os.environ, PYTHONPATH=str(ROOT / "src"))
        return subprocess.run(
            [sys.executable, "-m", "cli", *argv],
            check=False,
            capture_output=True,
            text=True,
            env=env,
            cwd=ROOT,
        )

    return run
