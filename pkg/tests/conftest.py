"""Shared fixtures: the two worked instances and both oracle flavors.

dpi1: c1 asserts A, c2 asserts A->B, c3 asserts B->C, observed !C.
      One minimal conflict {c1,c2,c3}; minimal diagnoses {c1},{c2},{c3}.
dpi2: c1 asserts A, c2 asserts !A, c3 asserts A->B, observed !B.
      Minimal conflicts {c1,c2},{c1,c3}; minimal diagnoses {c1},{c2,c3}.
"""

import pytest

from diagkit.formula import Atom, Implies, Not
from diagkit.model import DPI, ComponentId, FailureRates
from diagkit.reasoner import SatOracle, TruthTableOracle


def make_dpi(name, behaviors, obs=(), background=(), meas=(), rates=None):
    comps = tuple(ComponentId(i, f"c{i + 1}") for i in range(len(behaviors)))
    return DPI(name=name, comps=comps, behaviors=tuple(behaviors),
               background=tuple(background), obs=tuple(obs), meas=tuple(meas),
               rates=FailureRates(tuple(rates)) if rates else None)


@pytest.fixture
def dpi1():
    A, B, C = Atom("A"), Atom("B"), Atom("C")
    return make_dpi("dpi1", [A, Implies(A, B), Implies(B, C)], obs=[Not(C)])


@pytest.fixture
def dpi2():
    A, B = Atom("A"), Atom("B")
    return make_dpi("dpi2", [A, Not(A), Implies(A, B)], obs=[Not(B)],
                    rates=[0.1, 0.3, 0.3])


@pytest.fixture
def consistent_dpi():
    # Observation agrees with every behavior: the only minimal diagnosis is {}.
    A, B = Atom("A"), Atom("B")
    return make_dpi("allgood", [A, Implies(A, B)], obs=[B])


@pytest.fixture
def sat_oracle():
    return SatOracle()


@pytest.fixture
def tt_oracle():
    return TruthTableOracle()


@pytest.fixture(params=["sat", "tt"], ids=["dpll", "truthtable"])
def any_oracle(request, sat_oracle, tt_oracle):
    return sat_oracle if request.param == "sat" else tt_oracle
