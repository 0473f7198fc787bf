import math

import numpy as np
import pytest

from radpress.errors import ContractError, SingularSeparationError
from radpress.field_modes import (
    SpacetimePoint,
    Wavepacket,
    cross_term_Txx,
    mode_B,
    normal_ordered_BB,
    overlap_integral_at_mirror,
    overlap_pieces,
    vacuum_two_point,
)
from radpress.states import BoxMode, LightState


def test_box_normalization():
    assert BoxMode(3.0, 2.0).normalization ** 2 == pytest.approx(3.0 / 4.0, rel=1e-15)


def test_mode_B_origin():
    assert mode_B(BoxMode(1.0, 1.0), SpacetimePoint(0.0)) == pytest.approx(-math.sqrt(2), rel=1e-15)


@pytest.mark.parametrize("t", [0.0, 0.3, 7.1])
def test_mode_B_node(t):
    w = 2.5
    assert abs(mode_B(BoxMode(w), SpacetimePoint(t, x=math.pi / (2 * w)))) < 1e-15


@pytest.mark.parametrize("t", [0.0, 1.0, 123.4])
def test_mode_B_modulus(t):
    mode = BoxMode(1.7, 3.0)
    assert abs(mode_B(mode, SpacetimePoint(t))) ** 2 == pytest.approx(2 * 1.7 / 3.0, rel=1e-14)


def test_two_point_equal_times():
    # numerator dt^2 + |dx|^2 - 2 dz^2 is d^2 here
    d = 0.7
    val = vacuum_two_point(SpacetimePoint(0, 0, 0, 0), SpacetimePoint(0, d, 0, 0))
    assert val == pytest.approx(-1 / (math.pi ** 2 * d ** 4), rel=1e-14)


@pytest.mark.xfail(strict=True, reason="worked example doubles the numerator; formula gives -1/(pi^2 d^4)")
def test_two_point_equal_times_worked_example():
    d = 0.7
    val = vacuum_two_point(SpacetimePoint(0, 0, 0, 0), SpacetimePoint(0, d, 0, 0))
    assert val == pytest.approx(-2 / (math.pi ** 2 * d ** 4), rel=1e-14)


def test_image_term_equal_on_mirror():
    p1, p2 = SpacetimePoint(1.3, 0.2, 0.1, 0.0), SpacetimePoint(0.1, -0.4, 0.5, 0.0)
    empty = vacuum_two_point(p1, p2)
    assert vacuum_two_point(p1, p2, with_mirror=True) == pytest.approx(2 * empty, rel=1e-15)


def test_two_point_large_time_decay():
    p1 = SpacetimePoint(0, 0, 0, 0)
    v1 = vacuum_two_point(p1, SpacetimePoint(1e3, 0.3, 0.2, 0.1))
    v2 = vacuum_two_point(p1, SpacetimePoint(2e3, 0.3, 0.2, 0.1))
    assert v1 / v2 == pytest.approx(16.0, rel=1e-5)


def test_light_cone_rejected():
    with pytest.raises(SingularSeparationError):
        vacuum_two_point(SpacetimePoint(0), SpacetimePoint(1.0, 1.0))
    with pytest.raises(SingularSeparationError):
        vacuum_two_point(SpacetimePoint(0), SpacetimePoint(0))


def test_image_symmetry(rng):
    for _ in range(20):
        a = rng.normal(size=4)
        b = rng.normal(size=4)
        p1, p2 = SpacetimePoint(*a), SpacetimePoint(*b)
        q1 = SpacetimePoint(a[0], a[1], a[2], -a[3])
        q2 = SpacetimePoint(b[0], b[1], b[2], -b[3])
        assert vacuum_two_point(p1, p2, True) == pytest.approx(vacuum_two_point(q1, q2, True), rel=1e-12)


def test_normal_ordered_examples():
    vac = LightState.coherent(1.0, 0.0)
    assert normal_ordered_BB(vac, SpacetimePoint(0.3), SpacetimePoint(1.2)) == 0.0
    st = LightState.coherent(2.0, 1.5)
    c2 = BoxMode(2.0).normalization ** 2
    assert normal_ordered_BB(st, SpacetimePoint(0), SpacetimePoint(0)) == pytest.approx(16 * c2 * 2.25)
    shifted = LightState.coherent(2.0, 1.5, phase=math.pi / 2)
    assert abs(normal_ordered_BB(shifted, SpacetimePoint(0), SpacetimePoint(0))) < 1e-14


def test_normal_ordered_needs_coherent():
    with pytest.raises(ValueError):
        normal_ordered_BB(LightState.number(1.0, 3), SpacetimePoint(0), SpacetimePoint(1))


def test_cross_term_factorizes(rng):
    st = LightState.coherent(1.3, 0.8, phase=0.4)
    for _ in range(20):
        p1 = SpacetimePoint(rng.normal(), 0.0, rng.normal(), 0.0)
        p2 = SpacetimePoint(rng.normal() + 5, 0.0, rng.normal(), 0.0)
        expected = normal_ordered_BB(st, p1, p2) * vacuum_two_point(p1, p2, with_mirror=True)
        assert cross_term_Txx(st, p1, p2) == expected
    assert cross_term_Txx(LightState.coherent(1.0, 0.0), SpacetimePoint(0), SpacetimePoint(3, 0, 1)) == 0.0


@pytest.mark.parametrize("w0,expected", [(1.0, 2.0), (5.0, 10.0)])
def test_overlap_integral(w0, expected):
    assert overlap_integral_at_mirror(Wavepacket(w0, 0.05 * w0)) == pytest.approx(expected, rel=1e-3)


def test_overlap_incident_only_quarter():
    full = overlap_integral_at_mirror(Wavepacket(1.0, 0.05))
    half = overlap_integral_at_mirror(Wavepacket(1.0, 0.05, reflected=False))
    assert half == pytest.approx(full / 4, rel=1e-9)


def test_overlap_four_pieces_equal():
    pieces = overlap_pieces(Wavepacket(2.0, 0.1))
    vals = np.array(list(pieces.values()))
    assert np.ptp(vals) < 1e-9 * vals.mean()


def test_overlap_linear_in_frequency():
    ws = np.array([0.5, 1.0, 2.0, 4.0, 8.0])
    vals = np.array([overlap_integral_at_mirror(Wavepacket(w, 0.05 * w, area=2.0)) for w in ws])
    slope = np.polyfit(ws, vals, 1)[0]
    assert slope == pytest.approx(2.0, rel=1e-3)


def test_unnormalized_packet_rejected():
    with pytest.raises(ContractError):
        overlap_integral_at_mirror(Wavepacket(1.0, 0.05, scale=1.01))


def test_broad_packet_rejected():
    with pytest.raises(ValueError):
        Wavepacket(1.0, 0.2)
