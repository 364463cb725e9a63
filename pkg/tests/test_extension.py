import math

import numpy as np
import pytest

from cclab.field import GridField, TrigPoly, standard_bump
from cclab.extension import (poisson_extend, poisson_slab, average_extend,
                             harmonicity_residual, pairing_identity,
                             theoremD_ratio, thmD_ensemble, interpolation_ensemble,
                             frac_trace_check, slab_derivatives)

from conftest import random_bandlimited


def test_poisson_single_mode_decay():
    N = 64
    x = np.arange(N) * 2 * math.pi / N
    vals = np.broadcast_to(np.cos(3 * x)[:, None, None], (N, N, 1)).copy()
    f = GridField(vals, (2 * math.pi, 2 * math.pi))
    slab = poisson_slab(f, 0.5)
    assert np.max(np.abs(slab.values - math.exp(-1.5) * f.values)) < 1e-13


def test_poisson_constant_stays_constant():
    f = GridField(np.full((16, 16, 1), 4.0), (2 * math.pi, 2 * math.pi))
    slab = poisson_slab(f, 3.0)
    assert np.max(np.abs(slab.values - 4.0)) < 1e-13


def test_semigroup_exact(rng):
    f = random_bandlimited(rng, (32, 32), 2)
    a = poisson_slab(poisson_slab(f, 0.4), 0.7)
    b = poisson_slab(f, 1.1)
    assert np.max(np.abs(a.values - b.values)) < 1e-12


def test_poisson_trigpoly_exact():
    tp = TrigPoly.wave(2, (2, 1), "sin", 1.5)
    slab = poisson_slab(tp, 0.8)
    decay = math.exp(-0.8 * math.sqrt(5.0))
    grid = slab.render((32, 32))
    ref = tp.render((32, 32))
    assert np.max(np.abs(grid.values - decay * ref.values)) < 1e-14


def test_harmonicity_residual_small(rng):
    f = random_bandlimited(rng, (64, 64), 1, bandlimit=3)
    coarse = poisson_extend(f, np.linspace(0.2, 1.0, 12))
    fine = poisson_extend(f, np.linspace(0.2, 1.0, 48))
    # residual is normalized by the FD truncation scale, so both are tiny
    assert harmonicity_residual(coarse) < 1e-4
    assert harmonicity_residual(fine) < 1e-4


def test_average_extend_constant_and_lipschitz():
    c = GridField(np.full((64, 64, 1), 2.5), (2 * math.pi, 2 * math.pi))
    out = average_extend(c, [0.3, 0.6])
    for slab in out.slabs:
        assert np.max(np.abs(slab.values - 2.5)) < 1e-12
    # |U(x, t) - u(x)| <= L t for L-Lipschitz u
    N = 128
    x = np.arange(N) * 2 * math.pi / N
    u = GridField(np.sin(x)[:, None].repeat(N, 1)[..., None],
                  (2 * math.pi, 2 * math.pi))
    t = 0.4
    out = average_extend(u, [t])
    assert np.max(np.abs(out.slabs[0].values - u.values)) <= 1.0 * t + 1e-9


# -- pairing identity -------------------------------------------------------

def plateau_case(N=128):
    period = 2 * math.pi
    x = np.arange(N) * period / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    c = period / 2
    r = np.hypot(X - c, Y - c)
    cut = np.where(r < 1.2, 1.0,
                   np.where(r < 2.4,
                            standard_bump((r - 1.2) / 1.2)
                            / standard_bump(np.zeros(1))[0], 0.0))
    A = np.array([[2.0, 0.5], [0.3, 1.5]])
    u = GridField(np.stack([(A[0, 0] * (X - c) + A[0, 1] * (Y - c)) * cut,
                            (A[1, 0] * (X - c) + A[1, 1] * (Y - c)) * cut],
                           axis=-1), (period, period))
    phi = GridField(standard_bump(r / 1.0)[..., None], (period, period))
    return u, phi, A


def test_identity_linear_plateau():
    u, phi, A = plateau_case()
    rep = pairing_identity(u, phi, T=8.0, tLevels=64)
    expected = np.linalg.det(A) * float(np.sum(phi.values) * u.cell_volume)
    assert abs(rep["lhs"] - expected) < 1e-6 * abs(expected)
    assert rep["relError"] < 1e-6


def test_identity_antisymmetry():
    u, phi, _ = plateau_case()
    swapped = GridField(u.values[..., ::-1], u.period)
    a = pairing_identity(u, phi, T=8.0, tLevels=32)
    b = pairing_identity(swapped, phi, T=8.0, tLevels=32)
    assert abs(a["lhs"] + b["lhs"]) < 1e-12 * abs(a["lhs"])
    assert abs(a["rhs"] + b["rhs"]) < 1e-8 * abs(a["rhs"])


def test_identity_tail_check_fires():
    u, phi, _ = plateau_case(N=64)
    with pytest.raises(ValueError, match="tail bound"):
        pairing_identity(u, phi, T=0.5, tLevels=16)


def test_identity_input_validation():
    u = GridField(np.zeros((8, 8, 1)), (1.0, 1.0))
    phi = GridField(np.zeros((8, 8, 1)), (1.0, 1.0))
    with pytest.raises(ValueError):
        pairing_identity(u, phi)


# -- ratio experiments ------------------------------------------------------

def test_thmD_ensemble_stable():
    ens = thmD_ensemble()
    assert ens["spread"] <= 4.0


def test_thmD_amplitude_invariance():
    ens = thmD_ensemble(m_list=(16,), amplitudes=(0.5, 1.0, 2.0))
    ratios = [r["ratio"] for r in ens["records"]]
    assert max(ratios) / min(ratios) < 1.0 + 1e-10


def test_thmD_zero_denominator_not_applicable():
    z = TrigPoly.zero(2, 4)
    phi = TrigPoly.wave(2, (1, 0), "cos")
    rep = theoremD_ratio(z, z, phi, alpha=0.5)
    assert rep["ratio"] is None
    assert "not applicable" in rep["note"]


def test_thmD_equal_fields_zero_pairing():
    from cclab.extension import _divcurl_pair
    u = _divcurl_pair(8, 1.0, 0.75)
    phi = TrigPoly.wave(2, (1, 1), "cos")
    rep = theoremD_ratio(u, u, phi, alpha=0.5)
    # u = v: the polarized pairing vanishes; denominator vanishes too
    assert rep["ratio"] is None


def test_interpolation_ensemble_stable():
    ens = interpolation_ensemble()
    assert ens["spread"] <= 4.0


def test_interpolation_exponent_constraint_enforced():
    with pytest.raises(ValueError):
        interpolation_ensemble(alpha=0.5, q=1.0, p=2.0)


# -- fractional trace -------------------------------------------------------

def single_mode(m, N=512):
    x = np.arange(N) * 2 * math.pi / N
    return GridField(np.cos(m * x)[..., None], (2 * math.pi,))


def test_frac_trace_m_independent():
    consts = [frac_trace_check(single_mode(m), 0.5, 2.0)["constant"]
              for m in (2, 4, 8, 16)]
    assert max(consts) / min(consts) <= 1.10


def test_frac_trace_refinement_stable():
    f = single_mode(6)
    coarse = frac_trace_check(f, 0.5, 2.0,
                              tGrid=np.geomspace(1e-4, 12.0, 48))["constant"]
    fine = frac_trace_check(f, 0.5, 2.0,
                            tGrid=np.geomspace(1e-4, 12.0, 192))["constant"]
    assert abs(coarse - fine) <= 0.05 * fine


def test_frac_trace_constant_not_applicable():
    f = GridField(np.full((64, 1), 3.0), (2 * math.pi,))
    rep = frac_trace_check(f, 0.5, 2.0)
    assert rep["constant"] is None


def test_slab_derivatives_match_mode():
    f = single_mode(3, N=64)
    dt, dx = slab_derivatives(f, 0.5)
    x = np.arange(64) * 2 * math.pi / 64
    decay = math.exp(-1.5)
    assert np.max(np.abs(dt[..., 0] + 3 * decay * np.cos(3 * x))) < 1e-12
    assert np.max(np.abs(dx[..., 0] + 3 * decay * np.sin(3 * x))) < 1e-12
