"""Tests for the drive-only eigensystem and the dark-state census."""

import math

import numpy as np
import pytest

from diamondsim import (
    DarkReport,
    DressedSpectrum,
    Scenario,
    build_hamiltonian,
    closed_form_eigenvalues,
    dark_classification,
    dressed_spectrum,
    drive_invariants,
)
from diamondsim.errors import SimulationError


def drive_scenario(oa1, oc1, oa2):
    return Scenario(omega_a1=oa1, omega_c1=oc1, omega_a2=oa2, omega_c2=1.0)


def test_closed_form_matches_numpy_eigvalsh():
    rng = np.random.default_rng(314)
    for _ in range(200):
        s = drive_scenario(*rng.uniform(0.0, 20.0, 3))
        reference = np.linalg.eigvalsh(build_hamiltonian(s, exclude_probe=True))
        assert np.max(np.abs(closed_form_eigenvalues(s) - reference)) < 1e-10


def test_closed_form_block_spectrum():
    # omega_a1 = 0 splits the chain into two 2x2 blocks
    s = drive_scenario(0.0, 10.0, 15.0)
    assert np.allclose(closed_form_eigenvalues(s), [-15.0, -10.0, 10.0, 15.0], atol=1e-12)


def test_closed_form_golden_ratio_at_unit_drives():
    phi = (1.0 + math.sqrt(5.0)) / 2.0
    s = drive_scenario(1.0, 1.0, 1.0)
    assert np.allclose(
        closed_form_eigenvalues(s), [-phi, -1.0 / phi, 1.0 / phi, phi], atol=1e-12
    )


def test_spectrum_symmetric_about_zero():
    rng = np.random.default_rng(9)
    for _ in range(50):
        values = closed_form_eigenvalues(drive_scenario(*rng.uniform(0.0, 12.0, 3)))
        assert np.max(np.abs(values + values[::-1])) < 1e-10


def test_requires_zero_detunings():
    s = Scenario(omega_c1=1.0, delta_a1=0.5)
    with pytest.raises(SimulationError):
        closed_form_eigenvalues(s)
    with pytest.raises(SimulationError):
        dressed_spectrum(s)


def test_drive_invariants_consistent():
    rng = np.random.default_rng(27)
    for _ in range(100):
        oa1, oc1, oa2 = rng.uniform(0.0, 20.0, 3)
        inv = drive_invariants(drive_scenario(oa1, oc1, oa2))
        assert inv.total == pytest.approx(oa1**2 + oc1**2 + oa2**2, rel=1e-12)
        assert inv.discriminant == pytest.approx(
            inv.total**2 - 4.0 * oa2**2 * oc1**2, rel=1e-9, abs=1e-6
        )
        assert inv.discriminant >= 0.0


def test_discriminant_nonnegative_even_when_balanced():
    # oa1 = 0 with oc1 = oa2 makes the naive subtraction cancel exactly
    inv = drive_invariants(drive_scenario(0.0, 7.3, 7.3))
    assert inv.discriminant >= 0.0
    assert inv.discriminant == pytest.approx(0.0, abs=1e-9)


def test_grouping_of_degenerate_pair():
    spectrum = dressed_spectrum(drive_scenario(0.1, 5.0, 0.0))
    assert spectrum.groups == ((0,), (1, 2), (3,))


def test_spectrum_deterministic():
    first = dressed_spectrum(drive_scenario(2.0, 3.0, 4.0))
    second = dressed_spectrum(drive_scenario(2.0, 3.0, 4.0))
    assert np.array_equal(first.eigenvalues, second.eigenvalues)
    assert np.array_equal(first.eigenvectors, second.eigenvectors)


def brute_force_census(s):
    """Independent dark count: numpy eigensystem plus rank of the c row."""
    drive = build_hamiltonian(s, exclude_probe=True)
    values, vectors = np.linalg.eigh(drive)
    tol = 1e-9 * (1.0 + float(np.max(np.abs(values))))
    groups = [[0]]
    for k in range(1, 4):
        if values[k] - values[k - 1] < tol:
            groups[-1].append(k)
        else:
            groups.append([k])
    dims = []
    for group in groups:
        c_row = vectors[2, group].reshape(1, -1)
        dims.append(len(group) - int(np.linalg.matrix_rank(c_row, tol=1e-10)))
    return tuple(dims)


CENSUS_CASES = [
    # (oa1, oc1, oa2) -> per-group dark dimensions, total, degenerate flag
    ((0.0, 10.0, 15.0), (1, 0, 0, 1), 2, False),
    ((2.0, 3.0, 4.0), (0, 0, 0, 0), 0, False),
    ((0.1, 5.0, 0.0), (0, 1, 0), 1, True),
    ((0.1, 0.0, 10.0), (1, 1, 1), 3, True),
]


@pytest.mark.parametrize("drives,dims,total,degenerate", CENSUS_CASES)
def test_dark_census(drives, dims, total, degenerate):
    s = drive_scenario(*drives)
    report = dark_classification(dressed_spectrum(s))
    assert isinstance(report, DarkReport)
    assert report.group_dark_dims == dims
    assert report.total_dark == total
    assert report.degenerate is degenerate
    assert brute_force_census(s) == dims


def test_census_invariant_under_degenerate_remixing():
    spectrum = dressed_spectrum(drive_scenario(0.1, 5.0, 0.0))
    before = dark_classification(spectrum)
    c, z = math.cos(0.6), math.sin(0.6) * np.exp(0.4j)
    mixer = np.array([[c, -z.conjugate()], [z, c]])
    vectors = spectrum.eigenvectors.copy()
    vectors[:, 1:3] = vectors[:, 1:3] @ mixer
    remixed = DressedSpectrum(
        eigenvalues=spectrum.eigenvalues, eigenvectors=vectors, groups=spectrum.groups
    )
    assert dark_classification(remixed) == before
