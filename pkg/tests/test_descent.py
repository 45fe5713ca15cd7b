import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cansat.descent import (
    AirEnvironment,
    DescentBody,
    VehicleState,
    altitude_to_pressure,
    drag_force,
    integrate,
    pressure_to_altitude,
    step_descent,
    terminal_velocity,
)
from cansat.parachute import ParachuteSpec, size_for_descent

ENV = AirEnvironment()
MASS = 0.7276


def test_drag_zero_velocity():
    assert drag_force(1.5, 1.225, 0.0, 1.0) == 0.0


def test_drag_at_3_m_s():
    # 0.5 * 1.5 * 1.225 * 9 * 1
    assert drag_force(1.5, 1.225, 3.0, 1.0) == pytest.approx(8.26875, rel=1e-12)


def test_drag_quadratic_scaling():
    assert drag_force(1.2, 1.225, 8.0, 0.3) == pytest.approx(4 * drag_force(1.2, 1.225, 4.0, 0.3))


@pytest.mark.parametrize("cd,rho,area", [(-0.1, 1.225, 1.0), (1.0, 0.0, 1.0), (1.0, 1.225, -1.0)])
def test_drag_domain(cd, rho, area):
    with pytest.raises(ValueError):
        drag_force(cd, rho, 1.0, area)


@given(
    st.floats(0, 3), st.floats(0.1, 2), st.floats(0, 50), st.floats(0.01, 5), st.floats(1.01, 3)
)
def test_drag_even_and_monotone(cd, rho, v, area, factor):
    assert drag_force(cd, rho, v, area) == drag_force(cd, rho, -v, area)
    base = drag_force(cd, rho, v, area)
    assert drag_force(cd, rho, v * factor, area) >= base
    assert drag_force(cd * factor, rho, v, area) >= base
    assert drag_force(cd, rho * factor, v, area) >= base
    assert drag_force(cd, rho, v, area * factor) >= base


def test_terminal_velocity_zero_weight():
    assert terminal_velocity(0.0, 1.75, 1.225, 0.5) == 0.0


def test_terminal_velocity_small_chute():
    # weight 0.7276 kg * 9.81, canopy of 15 cm radius, no vent
    assert terminal_velocity(7.1378, 1.75, 1.225, 0.070686) == pytest.approx(9.706, abs=5e-4)


def test_terminal_velocity_3m_s_chute():
    v = terminal_velocity(7.1378, 1.75, 1.225, 0.73990)
    assert v == pytest.approx(3.000, abs=5e-4)
    assert drag_force(1.75, 1.225, 3.0, 0.73990) == pytest.approx(7.1378, rel=1e-4)


def test_terminal_velocity_degenerate():
    with pytest.raises(ValueError):
        terminal_velocity(1.0, 0.0, 1.225, 1.0)


@given(st.floats(0.01, 1000), st.floats(0.1, 3), st.floats(0.5, 1.5), st.floats(0.001, 10))
def test_terminal_velocity_balances_weight(weight, cd, rho, area):
    v = terminal_velocity(weight, cd, rho, area)
    assert drag_force(cd, rho, v, area) == pytest.approx(weight, rel=1e-9)


def test_pressure_reference_is_zero():
    assert pressure_to_altitude(1013.25, 1013.25) == 0.0


def test_pressure_500m():
    # oracle: forward formula evaluated independently of pressure_to_altitude
    p500 = 1013.25 * (1 - 500 / 44330) ** 5.255
    assert p500 == pytest.approx(954.62, abs=0.005)
    assert altitude_to_pressure(500.0) == pytest.approx(p500, rel=1e-12)
    assert pressure_to_altitude(954.62, 1013.25) == pytest.approx(500.0, abs=0.5)


def test_pressure_round_trip_900():
    assert pressure_to_altitude(altitude_to_pressure(900.0)) == pytest.approx(900.0, abs=0.01)


@pytest.mark.parametrize("p", [0.0, -5.0, 1013.25 * 1.06])
def test_pressure_domain(p):
    with pytest.raises(ValueError):
        pressure_to_altitude(p, 1013.25)


def _chute_3():
    return size_for_descent(MASS, 3.0, 1.75, ENV, 0.2)


def test_step_at_terminal_is_stationary():
    chute = _chute_3()
    body = DescentBody(MASS)
    vt = terminal_velocity(MASS * ENV.g, chute.cd, ENV.rho, chute.area)
    s0 = VehicleState(0.0, 500.0, -vt)
    s1 = step_descent(s0, body, [chute], ENV, 0.01)
    assert abs(s1.v - s0.v) < 1e-9
    assert s1.t == pytest.approx(0.01)


def test_step_free_fall_from_rest():
    s = step_descent(VehicleState(0.0, 100.0, 0.0), DescentBody(MASS, 0.0, 0.0), [], ENV, 0.01)
    assert s.v == pytest.approx(-0.0981, abs=1e-12)


def test_converges_to_closed_form_in_60s():
    chute = _chute_3()
    body = DescentBody(MASS)
    s = VehicleState(0.0, 900.0, 0.0)
    for _ in range(6000):
        s = step_descent(s, body, [chute], ENV, 0.01)
    vt = terminal_velocity(MASS * ENV.g, chute.cd, ENV.rho, chute.area)
    assert abs(abs(s.v) - vt) <= 0.01 * vt


def test_dt_bound():
    with pytest.raises(ValueError):
        step_descent(VehicleState(0.0, 10.0, 0.0), DescentBody(1.0), [], ENV, 0.2)


def test_ground_contact_clamps():
    s = VehicleState(0.0, 0.05, -3.0)
    s = step_descent(s, DescentBody(MASS), [], ENV, 0.05)
    assert (s.altitude, s.v) == (0.0, 0.0)
    s = step_descent(s, DescentBody(MASS), [], ENV, 0.05)
    assert (s.altitude, s.v) == (0.0, 0.0)


@given(st.integers(1, 2000), st.sampled_from([0.001, 0.01, 0.05, 0.1]))
@settings(max_examples=40)
def test_free_fall_error_bound(n, dt):
    h0 = 1e6
    s = integrate(VehicleState(0.0, h0, 0.0), DescentBody(1.0), [], ENV, dt, n)
    exact = h0 - 0.5 * ENV.g * (n * dt) ** 2
    assert abs(s.altitude - exact) < ENV.g * dt * dt * n / 2


@given(st.floats(0.2, 3.0), st.floats(0.05, 2.0), st.floats(0.0, 30.0))
@settings(max_examples=30)
def test_energy_non_increasing(mass, diameter, v0):
    chute = ParachuteSpec("c", diameter)
    body = DescentBody(mass, 0.8, 0.01)
    s = VehicleState(0.0, 900.0, -v0)
    g = ENV.g
    e = 0.5 * s.v**2 + g * s.altitude
    for _ in range(500):
        s = step_descent(s, body, [chute], ENV, 0.01)
        e_next = 0.5 * s.v**2 + g * s.altitude
        assert e_next <= e + 1e-9 * max(1.0, abs(e))
        e = e_next


def test_chute_drag_areas_add():
    a, b = ParachuteSpec("a", 0.5), ParachuteSpec("b", 1.0)
    body = DescentBody(MASS)
    s = VehicleState(0.0, 900.0, -8.0)
    both = step_descent(s, body, [a, b], ENV, 0.01)
    merged = ParachuteSpec("ab", math.sqrt(0.5**2 + 1.0**2))
    assert both.v == pytest.approx(step_descent(s, body, [merged], ENV, 0.01).v, rel=1e-12)


def test_integrate_matches_stepping():
    chute = _chute_3()
    body = DescentBody(MASS, 0.8, 0.0123)
    s = VehicleState(0.0, 900.0, 0.0)
    stepped = s
    for _ in range(700):
        stepped = step_descent(stepped, body, [chute], ENV, 0.01)
    fast = integrate(s, body, [chute], ENV, 0.01, 700)
    assert (fast.altitude, fast.v) == (stepped.altitude, stepped.v)
