import math

import numpy as np
import pytest

from phasecov.channels import GAD, MOUN, NMAD, OUN, RTN, Eternal, Phenomenological, combine


def catalog():
    """One representative per channel kind, including composites."""
    return {
        "nmad": NMAD(1.0, 0.1),
        "rtn": RTN(1.0, 1.0),
        "oun": OUN(0.1, 1.0),
        "moun": MOUN(0.1),
        "phenomenological": Phenomenological(0.3, T=0.5),
        "eternal": Eternal(0.5, 1.0),
        "gad": GAD(0.7, 0.4),
        "nmad+rtn": combine(NMAD(1.0, 0.1), RTN(0.5, 1.0)),
    }


@pytest.fixture(scope="session")
def channels():
    return catalog()


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


HALF_PI = math.pi / 2
