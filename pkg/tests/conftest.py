from __future__ import annotations

from pathlib import Path

import pytest

from vbisnr import SynthConfig, synthesize

DATA_DIR = Path(__file__).parent / "data"

# Ground truth used throughout: 20*log10(219 / 2.19) = 40 dB exactly.
SIGMA = 2.19
SOUND_CARRIER_HZ = 5.5e6


@pytest.fixture(scope="session")
def plan_text() -> str:
    return (DATA_DIR / "vhf_plan.csv").read_text()


@pytest.fixture(scope="session")
def clean_capture():
    return synthesize(SynthConfig(noise_sigma=SIGMA, seed=7))


@pytest.fixture(scope="session")
def interferer_capture():
    return synthesize(
        SynthConfig(
            noise_sigma=SIGMA,
            seed=7,
            interferers=((SOUND_CARRIER_HZ, 10.0, 0.0),),
        )
    )
