import math
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from lossyhom import ComplexIndex, CouplerSpec, OverlapModel, ScatteringAmplitudes  # noqa: E402
from lossyhom.coupled_mode import first_5050_lengths  # noqa: E402
from lossyhom.experiment_sim import ExperimentConfig, stage_scan  # noqa: E402

LAMBDA = 1.55
ROOT = Path(__file__).resolve().parents[1]
CONFIGS = ROOT / "configs"


@pytest.fixture
def ideal_amps():
    return ScatteringAmplitudes(1 / math.sqrt(2), 1j / math.sqrt(2))


def lossless_5050_coupler():
    n1, n2 = ComplexIndex(1.318), ComplexIndex(1.150)
    return CouplerSpec(n1, n2, LAMBDA, first_5050_lengths(n1, n2, LAMBDA, 1)[0])


def lab_scale_config(configuration="standard", visibility=0.955, coherence_length=162.6,
                       seed=0, coupler=None, efficiency=0.3, **kwargs):
    """7000 pairs/s, 0.3 x 0.3 lumped efficiency, 61 points over +-500 um, 1 s per point."""
    return ExperimentConfig(
        coupler=coupler or lossless_5050_coupler(),
        overlap=OverlapModel(coherence_length),
        stage_positions_um=stage_scan(-500.0, 500.0, 61),
        pair_rate_hz=7000.0,
        efficiency_arm1=efficiency,
        efficiency_arm2=efficiency,
        integration_time_s=kwargs.pop("integration_time_s", 1.0),
        configuration=configuration,
        visibility_cap=visibility,
        rng_seed=seed,
        **kwargs,
    )


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
