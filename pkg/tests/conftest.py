from fractions import Fraction as F
from pathlib import Path

import pytest

from pwlcycles.canonical import CanonicalForm, PWLSystem

SYSTEMS_DIR = Path(__file__).resolve().parent.parent / "systems"

SYSTEM_A = PWLSystem.from_rows(
    [[F(1), F(-5)], [F(377, 1000), F(-13, 10)]],
    [F(1), F(377, 1000)],
    [[F(19, 500), F(-1, 10)], [F(1, 10), F(19, 500)]],
    [F(19, 500), F(1, 10)],
)

SYSTEM_B = PWLSystem.from_rows(
    [[F(-1, 4), F(-1)], [F(65, 64), F(0)]],
    [F(260534, 1045519), F(-65, 64)],
    [[F(3276710, 13106841), F(-1)], [F(174473488105306, 171789280999281), F(0)]],
    [F(-260534, 1045519), F(-96440395023695996806, 95571015330487000887)],
)

SYSTEM_C = PWLSystem.from_rows(
    [[F(-1, 5), F(1)], [F(-1), F(-1, 5)]],
    [F(1, 250), F(-51, 50)],
    [[F(3, 8), F(1)], [F(-1), F(3, 8)]],
    [F(1159, 1000), F(-14333, 2000)],
)

# both-sides stable rotation with a sliding-free boundary; condition P holds
CONDITION_P = CanonicalForm(
    T_L=F(-3, 2), D_L=F(1), a_L=F(-1), T_R=F(-3, 2), D_R=F(1), a_R=F(1), b_star=F(1)
)

SYMMETRIC_CENTER = CanonicalForm(
    T_L=F(0), D_L=F(1), a_L=F(0), T_R=F(0), D_R=F(1), a_R=F(0), b_star=F(0)
)

THREE_CYCLE_SYSTEMS = {"three_cycles_a": SYSTEM_A, "three_cycles_b": SYSTEM_B, "three_cycles_c": SYSTEM_C}


@pytest.fixture(scope="session")
def three_cycle_systems():
    return THREE_CYCLE_SYSTEMS
