import json

import numpy as np
import pytest

from glimmreact.cli import (EXIT_ACCEPTANCE, EXIT_OK, EXIT_SOLVER, EXIT_VALIDATION, main,
                            parse_config)
from glimmreact.errors import ParseError, ValidationError

BASE = """\
gas: {gamma: 1.4, R: 1.0, q0: 1.0, mu: 1.0, eact: 0.0, T0: 0.1}
wall: {flat: true}
upstream:
  y0: -0.5
  upper:
    - {top: 0.0, state: [2.4, 0.0, 1.0, 0.8, 0.0]}
  lower:
    - {top: -0.5, state: LOWER}
scheme:
  h: 0.02
  x_max: 0.1
  delta0: 0.5
  theta: {source: van-der-corput, seed: 0}
"""


def config(lower="[2.0, 0.0, 1.0, 1.0, 0.0]", extra="", **scheme):
    text = BASE.replace("LOWER", lower)
    for k, v in scheme.items():
        text = text.replace(f"  {k}: ", f"  {k}: {v}  # was ")
    return text + extra


def write(tmp_path, text, name="cfg.yaml"):
    p = tmp_path / name
    p.write_text(text)
    return p


def test_minimal_config_parses():
    cfg = parse_config(config())
    assert cfg.h == 0.02 and cfg.y0 == -0.5
    assert len(cfg.config_hash) == 16


def test_subsonic_state_cites_h2():
    with pytest.raises(ValidationError) as info:
        parse_config(config(lower="[1.0, 0.0, 1.0, 1.0, 0.0]"))
    assert any(v.startswith("(H2)") for v in info.value.violations)


def test_wall_turning_exceeds_delta0():
    text = config(delta0="0.05").replace(
        "wall: {flat: true}", "wall: {vertices: [[0.0, 0.0], [0.02, 0.0], [1.0, 0.49]]}")
    with pytest.raises(ValidationError) as info:
        parse_config(text)
    msg = [v for v in info.value.violations if v.startswith("(small data)")]
    assert msg and "TV(g') = 0.5" in msg[0]


def test_parse_error_reports_line():
    with pytest.raises(ParseError) as info:
        parse_config(config().replace("h: 0.02", "h: abc"))
    assert info.value.line == 10
    assert info.value.field == "scheme.h"


def test_unknown_section():
    with pytest.raises(ParseError):
        parse_config(config(extra="bogus: 1\n"))


def test_run_outputs_constant_rows_and_are_reproducible(tmp_path):
    cfg = write(tmp_path, config())
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "a"), "--quiet"]) == EXIT_OK
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path / "b"), "--quiet"]) == EXIT_OK
    for name in ("columns.csv", "contact.csv", "diagnostics.csv"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    lines = [ln for ln in (tmp_path / "a" / "columns.csv").read_text().splitlines()
             if not ln.startswith("#")]
    data = np.genfromtxt(lines, delimiter=",", names=True)
    for k in np.unique(data["k"]):
        sel = data[data["k"] == k]
        first = data[data["k"] == 0]
        assert np.array_equal(sel["u"], first["u"]) and np.array_equal(sel["rho"], first["rho"])
    manifest = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert manifest["command"] == "run"


def test_probe_table(tmp_path):
    cfg = write(tmp_path, config())
    assert main(["probe", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == EXIT_OK
    text = (tmp_path / "probes.csv").read_text()
    names = [line.split(",")[0] for line in text.splitlines() if not line.startswith("#")]
    assert {"K_b", "K_b5", "K25"} <= set(names)


def test_validation_exit_code(tmp_path):
    cfg = write(tmp_path, config(lower="[1.0, 0.0, 1.0, 1.0, 0.0]"))
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == EXIT_VALIDATION


def test_missing_config_exit_code(tmp_path):
    assert main(["run", "--config", str(tmp_path / "nope.yaml"), "--quiet"]) == EXIT_VALIDATION


def test_solver_exit_code(tmp_path):
    # a confinement radius smaller than the data deviation aborts the run
    text = config().replace("  theta:", "  eps: 0.001\n  theta:").replace(
        "  lower:", "  background_upper: [2.45, 0.0, 1.0, 0.8, 0.0]\n  lower:")
    cfg = write(tmp_path, text)
    assert main(["run", "--config", str(cfg), "--out", str(tmp_path), "--quiet"]) == EXIT_SOLVER


def test_scaling_exit_code_follows_window(tmp_path):
    extra = "scaling: {deltas: [0.04, 0.02], h: 0.02, reacting: false}\n"
    cfg = write(tmp_path, config(extra=extra))
    code = main(["scaling", "--config", str(cfg), "--out", str(tmp_path), "--quiet"])
    manifest = json.loads((tmp_path / "manifest.json").read_text())
    assert code == (EXIT_OK if manifest["within_window"] else EXIT_ACCEPTANCE)
    assert (tmp_path / "scaling.csv").exists()
