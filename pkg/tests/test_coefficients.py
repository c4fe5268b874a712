import cmath
import json

import pytest
from mpmath import mp, mpf

from obstate.coefficients import (
    EULER_GAMMA,
    BetaTable,
    PhysParams,
    SeriesKind,
    beta_0_1,
    beta_2_1,
    beta_4_2,
    beta_table,
    channel_term,
    loop_count,
    order_phase,
)
from obstate.errors import NegativeLoops, NoClosedForm, OutOfRealDomain

mp.dps = 30


def rel(a, b):
    return abs(a - b) / abs(b)


@pytest.mark.parametrize("p", range(0, 11))
def test_loop_count_table(p):
    for n in (0, 2, 4):
        expected = p - n // 2 + 1
        if expected < 0:
            with pytest.raises(NegativeLoops):
                loop_count(n, p)
        else:
            assert loop_count(n, p) == expected


def test_loop_count_examples():
    assert loop_count(2, 1) == 1
    assert loop_count(4, 2) == 1
    assert loop_count(0, 1) == 2
    with pytest.raises(NegativeLoops):
        loop_count(4, 0)
    for bad in ((3, 1), (-2, 1), (2, -1)):
        with pytest.raises(ValueError):
            loop_count(*bad)


def test_euler_gamma_digits():
    assert EULER_GAMMA == float(mp.euler)


# -- pinned values against keyed-in high-precision expressions ----------------


def test_coupling_pole_coefficient():
    tbl = beta_4_2(PhysParams(1.0, 1.0), 4.0, 4.0, 4.0)
    assert tbl[1] == pytest.approx(float(1 / (32 * mp.pi**2)), rel=1e-15)
    assert tbl[1] == pytest.approx(0.0031662869888230555, rel=1e-15)


def test_vacuum_leading_pole():
    tbl = beta_0_1(PhysParams(1.0, 1.0))
    assert tbl[2] == pytest.approx(float(1 / (64 * mp.pi**4)), rel=1e-15)
    assert tbl[2] == pytest.approx(1.60405972729442737e-4, rel=1e-15)
    assert beta_0_1(PhysParams(2.0, 1.0))[2] == pytest.approx(4 * tbl[2], rel=1e-15)


def test_vacuum_subleading_pole():
    m2, mu = mpf(3), mpf("0.7")
    expected = m2**2 / (64 * mp.pi**4) * (mp.euler - 1 + mp.log(m2 / (4 * mp.pi * mu)))
    got = beta_0_1(PhysParams(3.0, 0.7))[1]
    assert rel(got, float(expected)) < 1e-13


def test_self_energy_at_special_scale():
    mu = 0.9
    m2 = 4 * cmath.pi * mu**2
    expected = mpf(m2) * (1 - mp.euler) / (16 * mp.pi**2)
    assert rel(beta_2_1(PhysParams(m2, mu)), float(expected)) < 1e-14


def test_self_energy_reference_value():
    expected = (1 - mp.euler + 2 * mp.log(4 * mp.pi)) / (16 * mp.pi**2)
    assert rel(beta_2_1(PhysParams(1.0, 1.0)), float(expected)) < 1e-14


def test_channel_sum_threshold_value():
    # s = t = u = 4 m^2: w = sqrt(2) in each channel
    r2 = mp.sqrt(2)
    expected = 3 * r2 * mp.log((r2 + 1) / (r2 - 1))
    got = sum(channel_term(4.0, 1.0) for _ in range(3))
    assert rel(got, float(expected)) < 1e-14


def test_coupling_finite_part_structure():
    m2, mu = mpf(1), mpf(2)
    chans = 3 * mp.sqrt(2) * mp.log((mp.sqrt(2) + 1) / (mp.sqrt(2) - 1))
    expected = 3 / (64 * mp.pi**2) * (mp.log(mu**2) - mp.euler + 2 + mp.log(4 * mp.pi * mu**2 / m2) - chans / 3)
    got = beta_4_2(PhysParams(1.0, 2.0), 4.0, 4.0, 4.0)[0]
    assert rel(got, float(expected)) < 1e-13


# -- scale derivatives ------------------------------------------------------------


def _dmu(f, mu, h=1e-5):
    return (f(mu * (1 + h)) - f(mu * (1 - h))) / (2 * mu * h)


@pytest.mark.parametrize("m2, mu", [(1.0, 1.0), (2.5, 0.3), (0.1, 7.0)])
def test_self_energy_mu_derivative(m2, mu):
    d = _dmu(lambda x: beta_2_1(PhysParams(m2, x)), mu)
    assert d == pytest.approx(m2 / (4 * cmath.pi**2 * mu), rel=1e-7)


@pytest.mark.parametrize("mu", [0.5, 1.0, 3.0])
def test_coupling_finite_part_mu_derivative(mu):
    d = _dmu(lambda x: beta_4_2(PhysParams(1.0, x), 5.0, 6.0, 7.0)[0], mu)
    assert d == pytest.approx(3 / (16 * cmath.pi**2 * mu), rel=1e-7)


# -- domains and dispatch ------------------------------------------------------------


@pytest.mark.parametrize("z", [0.0, -2.0, -4.0, -8.0])
def test_channel_outside_real_domain(z):
    with pytest.raises(OutOfRealDomain):
        channel_term(z, 1.0)


def test_channel_positive_is_finite_and_increasing():
    vals = [channel_term(z, 1.0) for z in (0.5, 1.0, 4.0, 100.0)]
    assert all(v > 0 for v in vals)
    assert vals == sorted(vals)


def test_beta_table_dispatch():
    prm = PhysParams(1.0, 1.0)
    assert set(beta_table(0, 1, prm).betas) == {0, 1, 2}
    assert beta_table(2, 1, prm)[0] == beta_2_1(prm)
    assert beta_table(4, 2, prm, (4.0, 4.0, 4.0)).loops == 1
    with pytest.raises(ValueError):
        beta_table(4, 2, prm)
    with pytest.raises(NoClosedForm):
        beta_table(2, 3, prm)
    with pytest.raises(NegativeLoops):
        beta_table(4, 0, prm)


def test_params_validation():
    with pytest.raises(ValueError):
        PhysParams(-1.0, 1.0)
    with pytest.raises(ValueError):
        PhysParams(1.0, 0.0)


def test_beta_table_rejects_out_of_range_keys():
    with pytest.raises(ValueError):
        BetaTable(2, 1, {2: 1.0})


def test_beta_table_json_roundtrip():
    tbl = beta_0_1(PhysParams(1.3, 0.4))
    data = json.loads(json.dumps(tbl.to_json()))
    assert data["loops"] == 2
    back = BetaTable.from_json(data)
    assert back.betas == tbl.betas and (back.n, back.p) == (0, 1)


@pytest.mark.parametrize("kind", list(SeriesKind))
@pytest.mark.parametrize("p", range(1, 9))
def test_order_phase_against_complex_powers(kind, p):
    a, b = {SeriesKind.MASS_SERIES: (1, 2), SeriesKind.COUPLING_SERIES: (2, 2), SeriesKind.VACUUM_SERIES: (0, 2)}[kind]
    expected = (-1j) ** p * 1j ** (a + b * p)
    assert abs(order_phase(kind, p) - expected) < 1e-12
    assert order_phase(kind, p) in (1, -1, 1j, -1j)


def test_order_phase_rejects_zero_order():
    with pytest.raises(ValueError):
        order_phase(SeriesKind.MASS_SERIES, 0)
