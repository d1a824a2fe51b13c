"""Tests for the nonlinear Pauli evolution."""

import math

import numpy as np
import pytest

from dynamics.initial_states import gaussian_state
from dynamics.sim_config import build_config
from errors import ConfigError
from observables.functionals import f_s
from observables.observable_series import PAULI_COLUMNS, ObservableSeries
from observables.pauli_functionals import f_p, polarized
from observables.series_analysis import convergence_ratio, drift_summary, variance_sup_gap, virial_residual
from pauli.pauli_extension import (
    blowup_sufficient_pauli,
    evolve_pauli,
    exact_variance_pauli,
    virial_rhs_p,
)
from theory.variance_oracles import BlowupVerdict, VarianceParams, exact_variance


def pauli_config(**changes):
    document = {
        'dim': 2, 'n': 64, 'L': 8.0, 'p': 3.0, 'mu': -1.0, 'B': 2.0,
        'dt': 0.005, 't_end': 0.2, 'observable_stride': 4, 'adaptive': False,
        'equation': 'pauli', 'spinor': {'up': 0.8, 'down': [0.0, 0.6]},
        'initial': {'kind': 'gaussian', 'width': 1.0, 'center': [0.5, 0.0], 'momentum': [0.0, 0.4]},
    }
    document.update(changes)
    return build_config(document)


def test_polarized_functional_is_scalar_functional(grid2d):
    f = gaussian_state(grid2d, width=1.1, center=(0.3, 0.2), momentum=(0.2, -0.5), charge=1)
    for spin_up in (True, False):
        assert f_p(polarized(f, spin_up=spin_up), -1.0, 3.0, 1.5) == pytest.approx(
            f_s(f, -1.0, 3.0, 1.5), rel=1e-10)


def test_linear_variance_follows_closed_form():
    config = pauli_config(mu=0.0, dt=0.05, t_end=math.pi / 2, observable_stride=1)
    result = evolve_pauli(config)
    first = result.series.rows[0]
    assert variance_sup_gap(
        result.series,
        lambda t: exact_variance_pauli(first['F_P'], config.B, first['g'], first['gdot'], t)) <= 1e-7


def test_nonlinear_run_conserves_mass_and_spin():
    result = evolve_pauli(pauli_config())
    assert result.series.pauli
    assert list(result.series.frame.columns) == PAULI_COLUMNS
    drift = drift_summary(result.series)
    assert drift['mass'] <= 1e-12
    assert drift['spin_z'] <= 1e-12
    assert drift['F_P'] <= 1e-3 * abs(result.series.rows[0]['F_P'])
    assert result.series.rows[0]['spin_z'] == pytest.approx(0.64 - 0.36, rel=1e-12)


def test_scalar_config_is_rejected():
    with pytest.raises(ConfigError) as info:
        evolve_pauli(pauli_config(equation="scalar"))
    assert info.value.key == "equation"


def test_oracles_reuse_the_scalar_forms():
    assert exact_variance_pauli(-3.0, 2.0, 1.0, 0.5, 0.2) == exact_variance(VarianceParams(-3.0, 2.0, 1.0, 0.5), 0.2)
    assert blowup_sufficient_pauli(-0.5, 0.0, -1.0, 3.0, 2) is BlowupVerdict.BLOWUP
    assert blowup_sufficient_pauli(0.5, 0.0, -1.0, 3.0, 2) is BlowupVerdict.INCONCLUSIVE


def test_virial_residual_along_a_spinor_run():
    config = pauli_config(dt=0.0025, t_end=0.4, observable_stride=4)
    F0 = {}
    rhs = []

    def observe(f, row):
        F0.setdefault('F_P', row['F_P'])
        rhs.append(virial_rhs_p(f, config.mu, config.p, config.B, F0['F_P']))

    series = evolve_pauli(config, observer=observe).series
    rhs = np.array(rhs)
    assert len(rhs) == len(series) == 41
    fine = virial_residual(series, rhs)
    assert fine.relative_gap <= 1e-3

    coarse_series = ObservableSeries(pauli=True)
    for row in series.rows[::2]:
        coarse_series.append(row)
    coarse = virial_residual(coarse_series, rhs[::2])
    assert 3.0 <= convergence_ratio(coarse.sup_gap, fine.sup_gap) <= 4.5


def test_functional_drift_is_second_order():
    base = dict(t_end=0.5, initial={'kind': 'gaussian', 'width': 1.0, 'center': [0.5, 0.0]})
    coarse = drift_summary(evolve_pauli(pauli_config(dt=0.01, observable_stride=5, **base)).series)
    fine = drift_summary(evolve_pauli(pauli_config(dt=0.005, observable_stride=10, **base)).series)
    for column in ("E_P", "F_P"):
        assert coarse[column] / fine[column] >= 3.5
