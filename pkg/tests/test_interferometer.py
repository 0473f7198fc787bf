import cmath
import math

import pytest

from radpress.errors import DomainError, InvalidCavityError, ReciprocityError, SearchError
from radpress.field_modes import Wavepacket
from radpress.interferometer import (
    BeamSplitter,
    DelayLine,
    FabryPerot,
    arm_dispersions_and_correlation,
    check_reciprocity,
    delay_line_delta_p2,
    delay_line_window_integrals,
    fabry_perot_delta_p2,
    noise_budget,
    optimize_power,
    phase_difference,
)
from radpress.states import LightState

S = 1 / math.sqrt(2)


def test_reciprocity_examples():
    assert check_reciprocity(1j * S, S, 1j * S, S).passed
    bad = check_reciprocity(S, S, S, S)
    assert not bad.passed
    assert bad.cross == pytest.approx(1.0, rel=1e-12)
    assert check_reciprocity(1.0, 0.0, 1.0, 0.0).passed


def test_beam_splitter_construction_rejects_violation():
    with pytest.raises(ReciprocityError):
        BeamSplitter(S, S, S, S)
    with pytest.raises(ReciprocityError):
        BeamSplitter.fifty_fifty(2)


@pytest.mark.parametrize("n", [1, 3, 5, 7, -1])
def test_fifty_fifty_passes(n):
    bs = BeamSplitter.fifty_fifty(n)
    assert bs.report().passed
    delta, k = phase_difference(bs)
    assert k % 2 == 1
    assert delta == pytest.approx((n % 4) * math.pi / 2, abs=1e-15)


def test_phase_difference_examples():
    assert phase_difference(cmath.exp(1j * math.pi / 2) * S, S) == (pytest.approx(math.pi / 2), 1)
    d, n = phase_difference(S, cmath.exp(-1.5j * math.pi) * S)
    assert (d, n) == (pytest.approx(1.5 * math.pi), 3)
    with pytest.raises(ReciprocityError):
        phase_difference(S, S)
    with pytest.raises(ReciprocityError):
        phase_difference(0.6, 0.8j)


@pytest.mark.parametrize("b,expected", [(3, 36.0), (1, 4.0)])
def test_delay_line(b, expected):
    state = LightState.coherent(1.0, 1.0)
    assert delay_line_delta_p2(state, DelayLine(b, 10.0, 5.0)) == expected


def test_delay_line_invariants():
    with pytest.raises(ValueError):
        DelayLine(0, 1.0, 0.5)
    with pytest.raises(ValueError):
        DelayLine(2, 1.0, 2.5)


def test_delay_line_packet_train():
    state = LightState.coherent(1.0, 1.0)
    line = DelayLine(4, 400.0, 500.0)
    pk = Wavepacket(1.0, 0.05)
    per = delay_line_window_integrals(line, pk)
    assert per == pytest.approx([2.0] * 4, rel=1e-3)
    overlap = delay_line_delta_p2(state, line, pk, separate_spots=False)
    apart = delay_line_delta_p2(state, line, pk, separate_spots=True)
    assert overlap == pytest.approx(apart, rel=1e-12)
    assert overlap == pytest.approx(16 * 4.0, rel=1e-3)


def test_fabry_perot_examples():
    st = LightState.coherent(1.0, 1.0)
    half = fabry_perot_delta_p2(st, FabryPerot(math.sqrt(0.5)))
    assert half.effective_bounces == pytest.approx(1.0, rel=1e-14)
    assert half.exact_factor == pytest.approx(4.0, rel=1e-14)
    high = fabry_perot_delta_p2(st, FabryPerot(math.sqrt(0.99)))
    assert high.exact_factor == pytest.approx(1e4, rel=1e-12)
    assert high.asymptotic / high.exact == pytest.approx(1.0, rel=1e-2)
    assert fabry_perot_delta_p2(st, FabryPerot(0.0)).exact_factor == 1.0
    with pytest.raises(InvalidCavityError):
        FabryPerot(1.0)


def test_fabry_perot_geometric_series_oracle():
    for r2 in (0.3, 0.9, 0.99):
        s, term = 0.0, 1.0
        while term > 1e-18:
            s += term
            term *= r2
        assert FabryPerot(math.sqrt(r2)).exact_factor == pytest.approx(s * s, rel=1e-12)


@pytest.mark.parametrize("r2", [0.5, 0.9, 0.999, 0.3 + 0.4j])
def test_effective_bounces_definition(r2):
    cav = FabryPerot(cmath.sqrt(r2) if isinstance(r2, complex) else math.sqrt(r2))
    q = abs(cav.reflection) ** 2
    assert q ** cav.effective_bounces == pytest.approx(0.5, abs=1e-12)


@pytest.mark.parametrize("r2", [0.9, 0.95, 0.99, 0.999])
def test_fabry_perot_asymptotic_gap_bound(r2):
    # gap is ln2 / b' to leading order (first order in 1/b')
    cav = FabryPerot(math.sqrt(r2))
    gap = 1 - cav.asymptotic_factor / cav.exact_factor
    assert 0 < gap < math.log(2) / cav.effective_bounces


@pytest.mark.xfail(strict=True, reason="gap is ~ln2/b' (69/b' percent), so a 10/b' percent gate cannot hold; see ledger")
def test_fabry_perot_ten_over_b_percent_gate():
    cav = FabryPerot(math.sqrt(0.99))
    gap = 1 - cav.asymptotic_factor / cav.exact_factor
    assert gap < 0.10 / cav.effective_bounces


@pytest.mark.parametrize("b,expected", [(1, (2.0, 2.0, 0.0, 4.0)), (3, (18.0, 18.0, 0.0, 36.0))])
def test_arm_dispersions(b, expected):
    res = arm_dispersions_and_correlation(LightState.coherent(1.0, 1.0), BeamSplitter.fifty_fifty(), b)
    assert (res.arm1, res.arm2, res.correlation, res.difference) == expected


def test_arm_dispersions_vacuum_and_odd_n():
    res = arm_dispersions_and_correlation(LightState.coherent(1.0, 0.0), BeamSplitter.fifty_fifty(), 2)
    assert (res.arm1, res.arm2, res.correlation, res.difference) == (0.0, 0.0, 0.0, 0.0)
    for n in (1, 3, 5, 7, 9, 11):
        r = arm_dispersions_and_correlation(LightState.coherent(2.0, 1.5), BeamSplitter.fifty_fifty(n), 1)
        assert r.correlation == 0.0
        assert r.arm1 == 0.5 * 2.25 * 16


def test_noise_budget_at_optimum():
    nb0 = noise_budget(1.0, 2.0, 3.0, 0.5, 2)
    nb = noise_budget(nb0.power_opt, 2.0, 3.0, 0.5, 2)
    assert nb.delta_x_rp == pytest.approx(math.sqrt(0.5 / 6), rel=1e-12)
    assert nb.delta_x_rp == pytest.approx(nb.delta_x_pc, rel=1e-12)
    assert nb.delta_x_total == pytest.approx(nb.delta_x_sql, rel=1e-12)
    assert nb.delta_x_total ** 2 == pytest.approx(nb.delta_x_rp ** 2 + nb.delta_x_pc ** 2, rel=1e-14)


def test_noise_budget_bounce_scaling():
    a = noise_budget(1.0, 1.0, 1.0, 1.0, 1)
    b = noise_budget(1.0, 1.0, 1.0, 1.0, 2)
    assert b.delta_x_rp == pytest.approx(2 * a.delta_x_rp)
    assert b.delta_x_pc == pytest.approx(a.delta_x_pc / 2)
    assert b.power_opt == pytest.approx(a.power_opt / 4)


def test_noise_budget_heavy_mirror_and_domain():
    nb = noise_budget(1.0, 1.0, 1e30, 1.0)
    assert nb.delta_x_rp < 1e-29 and nb.delta_x_sql < 1e-14
    with pytest.raises(DomainError):
        noise_budget(0.0, 1.0, 1.0, 1.0)


def test_noise_budget_exact_convention():
    nb = noise_budget(1.0, 1.0, 1.0, 1.0, convention="exact")
    assert nb.convention == "exact"
    assert nb.delta_x_rp == pytest.approx(2 / math.sqrt(3))
    with pytest.raises(ValueError):
        noise_budget(1.0, 1.0, 1.0, 1.0, convention="other")


@pytest.mark.parametrize("b,expected", [(1, 0.5), (10, 1 / 200)])
def test_optimize_power(b, expected):
    res = optimize_power(1.0, 1.0, 1.0, b)
    assert res["P_opt_analytic"] == pytest.approx(expected, rel=1e-15)
    assert res["P_opt_numeric"] == pytest.approx(expected, rel=1e-6)


def test_optimize_power_bracket_failure():
    with pytest.raises(SearchError):
        optimize_power(1.0, 1.0, 1.0, 1, log10_range=(1.0, 5.0))
