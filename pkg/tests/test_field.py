import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from cclab.field import (GridField, TrigPoly, fft, ifft, apply_symbol,
                         riesz_potential, apply_multiplier, trig_product,
                         trig_dot, trig_integral, mollify, save_field,
                         load_field, trigpoly_to_json, trigpoly_from_json)
from cclab.symbol import make_operator

from conftest import random_bandlimited


def test_fft_round_trip(rng):
    f = random_bandlimited(rng, (32, 32), 3)
    back = ifft(fft(f), f.period)
    assert np.max(np.abs(back.values - f.values)) < 1e-13


def test_parseval(rng):
    f = random_bandlimited(rng, (64, 64), 1)
    hat = fft(f) / (64 * 64)
    lhs = np.sum(f.values**2) * f.cell_volume
    rhs = np.sum(np.abs(hat) ** 2) * f.volume
    assert abs(lhs - rhs) < 1e-10 * max(1.0, lhs)


def test_apply_symbol_divergence_of_gradient():
    # v = (sin x1, cos x2): div v = cos x1 + sin x2 (sign via i^l A(xi))
    N = 64
    x = np.arange(N) * 2 * math.pi / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    v = GridField(np.stack([np.sin(X), np.cos(Y)], axis=-1))
    div = apply_symbol(make_operator("div2"), v)
    assert np.max(np.abs(div.values[..., 0] - (np.cos(X) - np.sin(Y)))) < 1e-12


def test_riesz_multiplier_inverts_laplacian_mode():
    N = 32
    x = np.arange(N) * 2 * math.pi / N
    X, Y = np.meshgrid(x, x, indexing="ij")
    f = GridField(np.cos(3 * X + 4 * Y)[..., None])
    out = apply_multiplier(riesz_potential(2), f)
    assert np.max(np.abs(out.values - f.values / 25.0)) < 1e-13


# -- TrigPoly ---------------------------------------------------------------

def test_wave_product_exact():
    a = TrigPoly.wave(2, (3, 0), "cos")
    b = TrigPoly.wave(2, (0, 5), "sin")
    prod = trig_product(a, b)
    # cos(3x) sin(5y) integrates to zero; squared integrates to pi^2
    assert np.allclose(trig_integral(prod), 0.0)
    sq = trig_product(prod, prod)
    assert abs(trig_integral(sq)[0] - math.pi**2) < 1e-14


def test_trig_derivative_exact():
    a = TrigPoly.wave(2, (7, 0), "sin", 2.0)
    d = a.derivative(0)
    grid = d.render((64, 64))
    x = np.arange(64) * 2 * math.pi / 64
    expected = 14.0 * np.cos(7 * x)[:, None] * np.ones(64)[None, :]
    assert np.max(np.abs(grid.values[..., 0] - expected)) < 1e-12


def test_big_integer_frequencies_exact():
    m = 10**40 + 1
    a = TrigPoly.wave(1, (m,), "cos")
    b = TrigPoly.wave(1, (-m,), "cos")
    prod = trig_product(a, b)
    # cos(mx)^2 has mean 1/2 regardless of m; frequencies stay exact ints
    assert abs(trig_integral(prod)[0] - math.pi) < 1e-15
    assert 2 * m in [abs(k[0]) for k in prod.terms if k[0] != 0]


def test_term_cap_enforced():
    big = TrigPoly(n=1, dimV=1,
                   terms={(k,): [1.0] for k in range(-2000, 2001)})
    with pytest.raises(OverflowError):
        trig_product(big, big, cap=10**6)


def test_hermitian_symmetry_enforced():
    with pytest.raises(ValueError):
        TrigPoly(n=1, dimV=1, terms={(1,): [1.0 + 0j]})


def test_trig_dot_matches_grid(rng):
    comps = [TrigPoly.wave(2, (1, 2), "cos", 0.7),
             TrigPoly.wave(2, (2, -1), "sin", 1.3)]
    v = TrigPoly.stack(comps)
    dot = trig_dot(v, v)
    grid = dot.render((32, 32))
    vg = v.render((32, 32))
    assert np.max(np.abs(grid.values[..., 0]
                         - np.sum(vg.values**2, axis=-1))) < 1e-12


@given(m1=st.integers(-5, 5), m2=st.integers(-5, 5),
       amp=st.floats(-3, 3, allow_nan=False))
def test_render_integral_consistency(m1, m2, amp):
    tp = TrigPoly.wave(2, (m1, m2), "cos", amp)
    grid = tp.render((16, 16))
    exact = trig_integral(tp)[0]
    quad = float(np.sum(grid.values) * grid.cell_volume)
    assert abs(exact - quad) < 1e-10 * (1 + abs(exact))


def test_mollify_preserves_mass(rng):
    f = random_bandlimited(rng, (64, 64), 1)
    f = GridField(f.values + 2.0, f.period)
    sm = mollify(f, 0.4)
    assert abs(float(np.sum(sm.values) - np.sum(f.values))
               * f.cell_volume) < 1e-10


def test_mollify_scale_validation(rng):
    f = random_bandlimited(rng, (16, 16), 1)
    with pytest.raises(ValueError):
        mollify(f, 0.0)
    with pytest.raises(ValueError):
        mollify(f, 10.0)


def test_field_serialization_round_trip(tmp_path, rng):
    f = random_bandlimited(rng, (16, 16), 2)
    save_field(f, tmp_path / "f")
    back = load_field(tmp_path / "f")
    assert np.array_equal(back.values, f.values)
    assert back.period == f.period


def test_trigpoly_serialization_round_trip():
    tp = TrigPoly.wave(2, (10**30, 2), "sin", 1.5)
    back = trigpoly_from_json(trigpoly_to_json(tp))
    assert set(back.terms) == set(tp.terms)
    for m in tp.terms:
        assert np.allclose(back.terms[m], tp.terms[m])
