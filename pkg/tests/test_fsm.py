import pytest
from hypothesis import given
from hypothesis import strategies as st

from cansat.fsm import (
    Buzzer,
    FlightMode,
    FlightStateMachine,
    FsmConfig,
    InvalidTransition,
    RejectedSample,
)

CHAIN = [
    FlightMode.PRELAUNCH,
    FlightMode.ASCENT,
    FlightMode.PRIMARY_DESCENT,
    FlightMode.SECONDARY_DESCENT,
    FlightMode.LANDED,
]


def in_mode(mode):
    fsm = FlightStateMachine()
    if mode >= FlightMode.ASCENT:
        fsm.trigger_launch(0.0)
    if mode >= FlightMode.PRIMARY_DESCENT:
        fsm.trigger_release(1.0)
    fsm.mode = mode
    return fsm


def feed(fsm, alts, t0=10.0, dt=0.1):
    out = []
    for i, a in enumerate(alts):
        out.append(fsm.on_altitude_sample(a, t0 + i * dt))
    return out


def test_deploy_after_debounce():
    fsm = in_mode(FlightMode.PRIMARY_DESCENT)
    res = feed(fsm, [510, 499, 498, 497])
    assert res[:3] == [None, None, None]
    assert res[3].to_mode is FlightMode.SECONDARY_DESCENT
    assert res[3].trigger_altitude == 497
    assert fsm.mode is FlightMode.SECONDARY_DESCENT


def test_rising_through_deploy_altitude_in_ascent():
    fsm = in_mode(FlightMode.ASCENT)
    assert feed(fsm, [490, 495, 500, 505, 510]) == [None] * 5
    assert fsm.mode is FlightMode.ASCENT


def test_landing_detection():
    fsm = in_mode(FlightMode.SECONDARY_DESCENT)
    res = feed(fsm, [1.5, 1.2, 0.9])
    assert res[-1].to_mode is FlightMode.LANDED


def test_noise_resets_debounce():
    fsm = in_mode(FlightMode.PRIMARY_DESCENT)
    # a rise breaks the descending streak
    assert feed(fsm, [505, 499, 498, 498.5, 497, 496]) == [None] * 6
    assert fsm.on_altitude_sample(495, 20.0).to_mode is FlightMode.SECONDARY_DESCENT


def test_release():
    fsm = FlightStateMachine()
    fsm.trigger_launch(0.0)
    tr = fsm.trigger_release(120.0)
    assert (tr.t, tr.from_mode, tr.to_mode) == (120.0, FlightMode.ASCENT, FlightMode.PRIMARY_DESCENT)
    assert fsm.active_chutes() == ("primary",)


def test_release_from_prelaunch_rejected():
    with pytest.raises(InvalidTransition):
        FlightStateMachine().trigger_release(1.0)


def test_double_release_rejected():
    fsm = FlightStateMachine()
    fsm.trigger_launch(0.0)
    fsm.trigger_release(120.0)
    before = list(fsm.events)
    with pytest.raises(InvalidTransition):
        fsm.trigger_release(121.0)
    assert fsm.events == before


def test_non_monotone_sample_time():
    fsm = in_mode(FlightMode.PRIMARY_DESCENT)
    fsm.on_altitude_sample(600, 5.0)
    with pytest.raises(RejectedSample):
        fsm.on_altitude_sample(590, 5.0)


@pytest.mark.parametrize(
    "mode,expected",
    [
        (FlightMode.PRIMARY_DESCENT, False),
        (FlightMode.SECONDARY_DESCENT, True),
        (FlightMode.LANDED, False),
    ],
)
def test_stabilization(mode, expected):
    assert in_mode(mode).stabilization_active() is expected


@pytest.mark.parametrize(
    "mode,sent,expected",
    [
        (FlightMode.SECONDARY_DESCENT, True, Buzzer.CHIRP),
        (FlightMode.LANDED, True, Buzzer.CONTINUOUS),
        (FlightMode.LANDED, False, Buzzer.CONTINUOUS),
        (FlightMode.PRELAUNCH, False, Buzzer.SILENT),
        (FlightMode.PRIMARY_DESCENT, False, Buzzer.SILENT),
    ],
)
def test_buzzer(mode, sent, expected):
    assert in_mode(mode).buzzer_pattern(sent) is expected


def test_config_ordering():
    with pytest.raises(ValueError):
        FsmConfig(release_altitude=400, secondary_deploy_altitude=500)
    with pytest.raises(ValueError):
        FsmConfig(debounce_samples=0)


def _run_stream(alts):
    fsm = FlightStateMachine()
    fsm.trigger_launch(0.0)
    for i, a in enumerate(alts):
        if i == len(alts) // 3 and fsm.mode is FlightMode.ASCENT:
            fsm.trigger_release(1.0 + i * 0.1 - 0.05)
        fsm.on_altitude_sample(a, 1.0 + i * 0.1)
    return fsm


@given(st.lists(st.floats(-5, 1000, allow_nan=False), max_size=300))
def test_modes_follow_chain_and_replay(alts):
    fsm = _run_stream(alts)
    modes = [FlightMode.PRELAUNCH] + [e.to_mode for e in fsm.events]
    assert modes == CHAIN[: len(modes)]
    assert all(a.t < b.t for a, b in zip(fsm.events, fsm.events[1:]))
    assert _run_stream(alts).events == fsm.events


@given(st.lists(st.floats(0, 1000, allow_nan=False), max_size=200))
def test_ascent_crossings_are_inert(alts):
    fsm = in_mode(FlightMode.ASCENT)
    feed(fsm, alts)
    assert fsm.mode is FlightMode.ASCENT


def test_trigger_lag_bound():
    # steady 10.5 m/s descent sampled at 10 Hz
    v, dt = 10.5, 0.1
    fsm = in_mode(FlightMode.PRIMARY_DESCENT)
    alt, t = 900.0, 2.0
    while fsm.mode is FlightMode.PRIMARY_DESCENT:
        fsm.on_altitude_sample(alt, t)
        alt -= v * dt
        t += dt
    deploy = fsm.events[-1].trigger_altitude
    assert 500 - v * dt * fsm.config.debounce_samples <= deploy <= 500
