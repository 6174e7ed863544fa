"""Generates the preset CSVs once per session through the benchmark CLI.

The plotting package talks to the simulator only through its command line and
file formats, so these fixtures shell out rather than import it.
"""
import subprocess
import sys

import pytest


def _run_preset(subcommand: str, preset: str, out):
    proc = subprocess.run(
        [sys.executable, "-m", "compression_readout.cli", subcommand,
         "--config", preset, "--out", str(out)],
        capture_output=True, text=True,
    )
    assert proc.returncode == 0, f"{preset} failed: {proc.stderr}"
    return out


@pytest.fixture(scope="session")
def fig2a_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("csv") / "fig2a.csv"
    return _run_preset("sweep-n", "fig2a", out)


@pytest.fixture(scope="session")
def fig3d_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("csv") / "fig3d.csv"
    return _run_preset("sweep-shots", "fig3d", out)


@pytest.fixture(scope="session")
def fig4d_csv(tmp_path_factory):
    out = tmp_path_factory.mktemp("csv") / "fig4d.csv"
    return _run_preset("advantage-map", "fig4d", out)
