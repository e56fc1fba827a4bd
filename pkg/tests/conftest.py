"""Shared fixtures: the worked gallstone example and small hand-built nets."""

from __future__ import annotations

import pytest

from bayesqa.model import make_network
from bayesqa.problog import parse, problog_to_bn

# The gallstone/flatulence/amylase worked example, whose solver output is
# amylase(patient,'500-1400'):  0.011316399. Several suites treat this text
# and the constants derived from it as frozen reference values.
GALLSTONE_TEXT = """\
0.1531::gallstones(patient).

0.3925::flatulence(patient) :- gallstones(patient).

0.4307::flatulence(patient) :- not gallstones(patient).

0.9346::amylase(patient, '0-299'); 0.0467::amylase(patient, '300-499'); 0.0187::amylase(patient, '500-1400') :- gallstones(patient).

0.9730::amylase(patient, '0-299'); 0.0169::amylase(patient, '300-499'); 0.0101::amylase(patient, '500-1400') :- not gallstones(patient).

evidence(flatulence(patient), true).

query(amylase(patient, '500-1400')).
"""

GALLSTONE_ANSWER = 0.011316399030456706

# chain-rule terms behind the answer: per-cause joints, their sum, and the
# evidence marginal (all as the float arithmetic of the engines produces them)
GALLSTONE_JOINT_WITH_CAUSE = 0.001123715725
GALLSTONE_JOINT_WITHOUT_CAUSE = 0.003684074283
GALLSTONE_NUMERATOR = 0.004807790008
GALLSTONE_EVIDENCE_MARGINAL = 0.42485158


@pytest.fixture(scope="session")
def gallstone_program():
    return parse(GALLSTONE_TEXT)


@pytest.fixture(scope="session")
def gallstone_net(gallstone_program):
    return problog_to_bn(gallstone_program, name="gallstone")


@pytest.fixture()
def sprinkler_net():
    """The textbook v-structure: rain -> grass_wet <- sprinkler."""

    return make_network(
        "sprinkler",
        {
            "rain": (("yes", "no"), (), {(): (0.2, 0.8)}),
            "sprinkler": (("on", "off"), (), {(): (0.1, 0.9)}),
            "grass_wet": (
                ("yes", "no"),
                ("rain", "sprinkler"),
                {
                    ("yes", "on"): (0.99, 0.01),
                    ("yes", "off"): (0.8, 0.2),
                    ("no", "on"): (0.9, 0.1),
                    ("no", "off"): (0.05, 0.95),
                },
            ),
        },
        entity="garden",
    )
