"""Tests for the parameter model, closure completion, and the mirror swap."""

from dataclasses import replace

import numpy as np
import pytest

from diamondsim import (
    ClosureError,
    Scenario,
    build_hamiltonian,
    closure_complete,
    closure_defect,
    decay_channels,
    mirror_scenario,
)
from diamondsim.atom import MIRROR_PERMUTATION


def test_closure_defect_formula():
    s = Scenario(delta_a1=1.0, delta_c1=2.0, delta_a2=0.5, delta_c2=-3.0)
    assert closure_defect(s) == 1.0 + 2.0 - 0.5 - (-3.0)


@pytest.mark.parametrize("target", ["a1", "a2", "c1", "c2"])
def test_completion_fixes_only_the_target(target):
    s = Scenario(
        omega_a1=1.0,
        delta_a1=0.7,
        delta_a2=-1.3,
        delta_c1=2.2,
        delta_c2=0.4,
        closure_target=target,
    )
    done = closure_complete(s)
    assert abs(closure_defect(done)) < 1e-12
    changed = f"delta_{target}"
    for name in ("delta_a1", "delta_a2", "delta_c1", "delta_c2"):
        if name != changed:
            assert getattr(done, name) == getattr(s, name)


@pytest.mark.parametrize("target", ["a1", "a2", "c1", "c2"])
def test_completion_idempotent(target):
    s = Scenario(delta_a1=0.3, delta_a2=1.9, delta_c1=-0.8, delta_c2=5.0, closure_target=target)
    once = closure_complete(s)
    assert closure_complete(once) == once


def test_completion_formulas():
    s = Scenario(delta_a1=1.0, delta_a2=2.0, delta_c1=3.0, delta_c2=4.0, closure_target="a1")
    assert closure_complete(s).delta_a1 == 2.0 + 4.0 - 3.0
    s = replace(s, closure_target="a2")
    assert closure_complete(s).delta_a2 == 1.0 + 3.0 - 4.0
    s = replace(s, closure_target="c1")
    assert closure_complete(s).delta_c1 == 2.0 + 4.0 - 1.0
    s = replace(s, closure_target="c2")
    assert closure_complete(s).delta_c2 == 1.0 + 3.0 - 2.0


def test_none_target_rejects_fully_driven_violation():
    s = Scenario(
        omega_a1=1.0,
        omega_a2=1.0,
        omega_c1=1.0,
        omega_c2=1.0,
        delta_a1=1.0,
        closure_target="none",
    )
    with pytest.raises(ClosureError):
        closure_complete(s)


def test_none_target_allows_inactive_field_mismatch():
    # a vanishing Rabi frequency makes its detuning a free frame parameter
    s = Scenario(omega_a1=0.0, omega_a2=1.0, omega_c1=1.0, omega_c2=1.0, delta_a1=3.0)
    assert closure_complete(s) == s


def test_hamiltonian_layout():
    s = Scenario(
        omega_a1=1.0,
        omega_a2=2.0,
        omega_c1=3.0,
        omega_c2=4.0,
        delta_a1=5.0,
        delta_a2=6.0,
        delta_c1=7.0,
    )
    expected = np.array(
        [
            [5.0, 1.0, 3.0, 0.0],
            [1.0, 0.0, 0.0, 2.0],
            [3.0, 0.0, 12.0, 4.0],
            [0.0, 2.0, 4.0, 6.0],
        ]
    )
    assert np.array_equal(build_hamiltonian(s), expected)


def test_hamiltonian_symmetric():
    b = build_hamiltonian(Scenario(omega_a1=1.5, omega_c2=0.3, delta_a2=-2.0))
    assert np.array_equal(b, b.T)


def test_probe_detuning_never_enters_hamiltonian():
    s = Scenario(omega_a1=1.0, omega_c2=2.0, delta_a1=0.5)
    assert np.array_equal(build_hamiltonian(s), build_hamiltonian(replace(s, delta_c2=9.0)))


def test_exclude_probe_drops_only_the_probe_coupling():
    s = Scenario(omega_a1=1.0, omega_a2=2.0, omega_c1=3.0, omega_c2=4.0)
    full = build_hamiltonian(s)
    drive = build_hamiltonian(s, exclude_probe=True)
    assert drive[2, 3] == 0.0 and drive[3, 2] == 0.0
    drive[2, 3] = full[2, 3]
    drive[3, 2] = full[3, 2]
    assert np.array_equal(drive, full)


def test_decay_channel_order_and_rates():
    s = Scenario(gamma1=1.0, gamma2=2.0, gamma3=3.0, gamma4=4.0)
    channels = decay_channels(s)
    assert [(c.from_level, c.to_level, c.rate) for c in channels] == [
        ("c", "a", 1.0),
        ("c", "d", 2.0),
        ("a", "b", 3.0),
        ("d", "b", 4.0),
    ]


def test_mirror_is_an_involution():
    s = Scenario(
        omega_a1=1.0,
        omega_a2=2.0,
        omega_c1=3.0,
        omega_c2=4.0,
        delta_a1=0.1,
        delta_a2=0.2,
        delta_c1=0.3,
        delta_c2=0.4,
        gamma1=1.1,
        gamma2=1.2,
        gamma3=1.3,
        gamma4=1.4,
        closure_target="a1",
    )
    assert mirror_scenario(mirror_scenario(s)) == s


def test_mirror_swaps_pairs():
    s = Scenario(omega_a1=1.0, omega_a2=2.0, omega_c1=3.0, omega_c2=4.0,
                 gamma1=0.5, gamma2=0.6, gamma3=0.7, gamma4=0.8, closure_target="c1")
    m = mirror_scenario(s)
    assert (m.omega_a1, m.omega_a2) == (2.0, 1.0)
    assert (m.omega_c1, m.omega_c2) == (4.0, 3.0)
    assert (m.gamma1, m.gamma2) == (0.6, 0.5)
    assert (m.gamma3, m.gamma4) == (0.8, 0.7)
    assert m.closure_target == "c2"


def test_mirror_conjugates_the_hamiltonian():
    rng = np.random.default_rng(5)
    p = MIRROR_PERMUTATION
    for _ in range(25):
        s = Scenario(
            omega_a1=rng.uniform(0, 5),
            omega_a2=rng.uniform(0, 5),
            omega_c1=rng.uniform(0, 5),
            omega_c2=rng.uniform(0, 5),
            delta_a1=rng.uniform(-3, 3),
            delta_a2=rng.uniform(-3, 3),
            delta_c1=rng.uniform(-3, 3),
            closure_target="c2",
        )
        s = closure_complete(s)
        left = p @ build_hamiltonian(s) @ p
        right = build_hamiltonian(mirror_scenario(s))
        assert np.max(np.abs(left - right)) < 1e-12


def test_scenario_validation():
    with pytest.raises(ValueError):
        Scenario(omega_a1=-1.0)
    with pytest.raises(ValueError):
        Scenario(gamma2=-0.5)
    with pytest.raises(ValueError):
        Scenario(delta_a1=float("nan"))
    with pytest.raises(ValueError):
        Scenario(omega_c2=float("inf"))
    with pytest.raises(ValueError):
        Scenario(closure_target="b7")
