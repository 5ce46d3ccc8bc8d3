import math

import pytest

from memcav.errors import ConfigError
from memcav.params import (
    CONST,
    ExperimentParams,
    MembraneSpec,
    PhysicalConstants,
    load_config,
    save_config,
    validate,
    with_value,
)


def test_constants_pinned():
    assert CONST.hbar == 1.054571628e-34
    assert CONST.k_B == 1.3806504e-23
    assert CONST.c == 2.99792458e8


def test_constants_not_overridable():
    with pytest.raises(TypeError):
        PhysicalConstants(hbar=1.0)
    with pytest.raises(Exception):
        CONST.hbar = 2.0


def test_load_config_row1(row1_config, row1):
    p = load_config(row1_config)
    assert validate(p) == []
    assert p.Q == 1.2e7
    assert p.r_c == 0.999
    assert p.L == 0.067
    assert math.isclose(p.omega_m, row1.omega_m, rel_tol=1e-10)


def test_load_config_rejects_rc_one(tmp_path, row1_config):
    text = row1_config.read_text().replace("r_c = 0.999", "r_c = 1.0")
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    with pytest.raises(ConfigError, match="r_c must be < 1"):
        load_config(bad)


def test_load_config_rejects_negative_omega(tmp_path, row1_config):
    text = row1_config.read_text().replace("omega_m = 6.2831853071795865e5",
                                           "omega_m = -1")
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    with pytest.raises(ConfigError, match="omega_m"):
        load_config(bad)


@pytest.mark.parametrize("mutation, key", [
    ("L = 0.067\n", "missing"),           # dropped line -> missing key
    ("L = zero\n", "not a number"),
    ("extra = 1\n", "unknown key"),
])
def test_load_config_malformed(tmp_path, row1_config, mutation, key):
    text = row1_config.read_text()
    if key == "missing":
        text = text.replace("L = 0.067\n", "")
    elif key == "not a number":
        text = text.replace("L = 0.067\n", "L = zero\n")
    else:
        text += "extra = 1\n"
    bad = tmp_path / "bad.cfg"
    bad.write_text(text)
    with pytest.raises(ConfigError):
        load_config(bad)


def test_validate_ordering(row1):
    p = with_value(with_value(row1, "F", 0.5), "T", 0.0)
    violations = validate(p)
    assert len(violations) == 2
    assert violations[0].startswith("F ")
    assert violations[1].startswith("T ")


def test_validate_rc_boundary(row1):
    assert validate(with_value(row1, "r_c", 1.0)) == ["r_c must be < 1 (got 1.0)"]
    assert validate(with_value(row1, "r_c", 0.0)) == []


def test_validate_x0_quarter_period(row1):
    assert validate(with_value(row1, "x0", row1.lam / 4)) != []
    assert validate(with_value(row1, "x0", row1.lam / 16)) == []


def test_save_load_roundtrip(tmp_path, row1):
    path = tmp_path / "out.cfg"
    save_config(row1, path)
    p = load_config(path)
    assert p == row1  # full float precision


def test_membrane_spec_invariants():
    MembraneSpec(2.0, 50e-9)
    with pytest.raises(ValueError):
        MembraneSpec(0.9, 50e-9)
    with pytest.raises(ValueError):
        MembraneSpec(2.0, 0.0)


def test_with_value_unknown_field(row1):
    with pytest.raises(ValueError):
        with_value(row1, "nope", 1.0)
