import pytest

from cansat.config import ConfigError, default_config, load_config, parse_config_text


def test_default_embeds_flight_constants():
    cfg = default_config()
    assert cfg.fsm.release_altitude == 900
    assert cfg.fsm.secondary_deploy_altitude == 500
    assert cfg.cadence == 2.0
    assert cfg.link.nominal_range == 1200
    assert cfg.battery.capacity == 1090
    assert cfg.body.mass == pytest.approx(0.7276)
    assert cfg.env.rho == 1.225
    assert (cfg.can.height, cfg.can.diameter) == (310, 125)
    assert cfg.primary.deploy_altitude == 900 and cfg.secondary.deploy_altitude == 500
    assert cfg.primary.spill_ratio == 0.2


def test_override_file(tmp_path):
    p = tmp_path / "m.cfg"
    p.write_text("# drop from higher\nfsm.release_altitude = 1000\nmission.seed = 7\n")
    cfg = load_config(p)
    assert cfg.fsm.release_altitude == 1000
    assert cfg.seed == 7 and cfg.link.seed == 8
    assert cfg.primary.deploy_altitude == 1000


def test_component_table_replaced(tmp_path):
    p = tmp_path / "m.cfg"
    p.write_text("component.Brick = 500, NONE, 0\n")
    cfg = load_config(p)
    assert [c.name for c in cfg.components] == ["Brick"]
    assert cfg.body.mass == pytest.approx(0.5)


def test_explicit_diameter(tmp_path):
    p = tmp_path / "m.cfg"
    p.write_text("chute.secondary.diameter = 0.30\n")
    assert load_config(p).secondary.canopy_diameter == 0.30


@pytest.mark.parametrize(
    "text,key",
    [
        ("mission.dt = 0.5\n", "mission.dt"),
        ("mission.dt = fast\n", "mission.dt"),
        ("mission.cadence = 2.005\n", "mission.cadence"),
        ("fsm.debounce_samples = 0\n", "fsm"),
        ("chute.primary.spill_ratio = 1.2\n", "chute.primary"),
        ("battery.regulator_efficiency = 0\n", "battery.regulator_efficiency"),
        ("nonsense.key = 1\n", "nonsense.key"),
        ("component.Thing = 1, 7V, 3\n", "component.Thing"),
    ],
)
def test_invalid_config_names_field(tmp_path, text, key):
    p = tmp_path / "m.cfg"
    p.write_text(text)
    with pytest.raises(ConfigError) as exc:
        load_config(p)
    assert exc.value.key.startswith(key)


def test_syntax_errors():
    with pytest.raises(ConfigError, match="expected 'key = value'"):
        parse_config_text("just words\n")
    with pytest.raises(ConfigError, match="duplicate"):
        parse_config_text("a = 1\na = 2\n")
