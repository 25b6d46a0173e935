import csv
import io

import numpy as np
import pytest

from proplab import cli, oracles

ISO_345 = """\
# isotropic 3-4-5 case
omega_x = 3
omega_y = 3
b_field = 8
x_a = 0
y_a = 0
x_b = 1
y_b = 0.5
duration_t = 0.2
"""


def write(tmp_path, text, name="run.cfg"):
    path = tmp_path / name
    path.write_text(text)
    return str(path)


def read_csv(path):
    with open(path) as fh:
        return list(csv.DictReader(fh))


def test_parse_config():
    cfg = cli.parse_config(ISO_345 + "slices = 64\n", basis=12)
    assert cfg.system.omega_L == 4.0 and cfg.endpoints.x_b == 1.0
    assert cfg.durations == (0.2,) and cfg.slices == 64 and cfg.basis == 12


def test_parse_sweep_and_override():
    cfg = cli.parse_config(ISO_345.replace("0.2\n", "0.2, 0.3,0.4\n") + "slices = 8\n", slices=16)
    assert cfg.durations == (0.2, 0.3, 0.4) and cfg.slices == 16
    assert [ep.duration_T for ep in cfg.sweep()] == [0.2, 0.3, 0.4]


@pytest.mark.parametrize("text", [
    "mass = 1\ncolour = red\n",
    "mass = one\n",
    "mass = -1\n",
    "mass = 1\nmass = 2\n",
    "just words\n",
    "x_a = 0\n",
    "duration_t = 0\n",
    "tolerance = -1\n",
])
def test_parse_rejects(text):
    with pytest.raises(cli.ConfigError):
        cli.parse_config(text)


def test_emit_empty_table(tmp_path):
    out = tmp_path / "t.csv"
    report = cli.emit_table([], str(out), header=["a", "b"])
    assert out.read_text() == "a,b\n" and report.artifacts_written == [str(out)]


def test_emit_round_trip(tmp_path):
    out = tmp_path / "t.csv"
    value = complex(np.pi, -np.e / 3)
    cli.emit_table([[1, 0.1 + 0.2, value]], str(out), header=["k", "x", "z"])
    row = read_csv(out)[0]
    assert list(row) == ["k", "x", "z_re", "z_im"]
    assert float(row["x"]) == 0.1 + 0.2
    assert complex(float(row["z_re"]), float(row["z_im"])) == value


def test_emit_convergence_table(tmp_path):
    table = oracles.convergence_table(lambda n: 1 + 1 / n, [40, 10, 20], 1.0)
    out = tmp_path / "t.csv"
    cli.emit_table(table, str(out))
    rows = read_csv(out)
    assert [int(r["N"]) for r in rows] == [10, 20, 40]


def test_emit_unwritable(tmp_path):
    report = cli.emit_table([], str(tmp_path / "missing" / "t.csv"), header=["a"])
    assert report.status == cli.INPUT_ERROR


def test_propagate(tmp_path):
    out = tmp_path / "k.csv"
    code = cli.main(["propagate", "--config", write(tmp_path, ISO_345), "--output", str(out),
                     "--slices", "4096"])
    assert code == 0
    row = read_csv(out)[0]
    # frozen from the sliced oracle at N = 4096: |K| = 0.945620903353424
    assert float(row["fluct_modulus"]) == pytest.approx(0.945620903353424, rel=1e-3)
    assert float(row["fluct_modulus"]) == pytest.approx(0.9459, rel=1e-3)
    assert float(row["sliced_rel_error"]) < 1e-3


def test_propagate_is_deterministic(tmp_path):
    cfg = write(tmp_path, ISO_345.replace("0.2\n", "0.2, 0.7\n"))
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    cli.main(["propagate", "--config", cfg, "--output", str(a)])
    cli.main(["propagate", "--config", cfg, "--output", str(b)])
    assert a.read_bytes() == b.read_bytes()


def test_propagate_reports_caustic(tmp_path, capsys):
    cfg = write(tmp_path, ISO_345.replace("0.2\n", f"{np.pi / 5!r}\n"))
    assert cli.main(["propagate", "--config", cfg]) == 0
    assert "caustic" in capsys.readouterr().err


def test_action(tmp_path):
    out = tmp_path / "s.csv"
    code = cli.main(["action", "--config", write(tmp_path, ISO_345), "--output", str(out),
                     "--tolerance", "1e-8"])
    assert code == 0
    methods = {r["method"]: float(r["action"]) for r in read_csv(out)}
    assert set(methods) == {"bvp_oracle", "general", "iso_B", "aniso_B"}
    assert methods["iso_B"] == pytest.approx(methods["bvp_oracle"], rel=1e-8)


def test_spectrum(tmp_path):
    out = tmp_path / "e.csv"
    code = cli.main(["spectrum", "--config", write(tmp_path, ISO_345), "--output", str(out),
                     "--basis", "24"])
    assert code == 0
    rows = read_csv(out)
    assert len(rows) == 10 and float(rows[0]["eigenvalue"]) == pytest.approx(5.0, abs=1e-12)


def test_spectrum_needs_isotropy(tmp_path):
    cfg = write(tmp_path, ISO_345.replace("omega_y = 3", "omega_y = 2"))
    assert cli.main(["spectrum", "--config", cfg, "--basis", "8"]) == 2


def test_zeta(tmp_path):
    out = tmp_path / "z.csv"
    assert cli.main(["zeta", "--config", write(tmp_path, ""), "--output", str(out)]) == 0
    rows = {r["quantity"]: float(r["analytic"]) for r in read_csv(out)}
    assert rows["zeta(0)"] == -0.5
    assert rows["zeta(-1)"] == -1 / 12
    assert rows["zeta'(0)"] == -0.5 * np.log(2 * np.pi)


def test_zeta_tight_tolerance_fails(tmp_path):
    cfg = write(tmp_path, "tolerance = 1e-30\n")
    assert cli.main(["zeta", "--config", cfg, "--output", str(tmp_path / "z.csv")]) == 1


def test_verify_huge_tolerance(tmp_path):
    out = tmp_path / "v.csv"
    code = cli.main(["verify", "--config", write(tmp_path, ""), "--output", str(out),
                     "--tolerance", "1e30"])
    assert code == 0
    assert all(r["passed"] == "true" for r in read_csv(out))


def test_demo_sine(tmp_path):
    out = tmp_path / "m.csv"
    cfg = write(tmp_path, "b_field = 2\nduration_t = 1.3\n")
    assert cli.main(["demo-sine", "--config", cfg, "--output", str(out), "--basis", "6"]) == 0
    rows = read_csv(out)
    assert len(rows) == 36
    for r in rows:
        n, m = int(r["n"]), int(r["m"])
        if (n + m) % 2 == 0:
            assert r["exact_times_T2"] == "0" and float(r["value"]) == 0.0
        else:
            assert float(r["value"]) == pytest.approx(4 * n * m / (1.3**2 * (n * n - m * m)), rel=1e-15)


def test_missing_config_file(tmp_path):
    assert cli.main(["zeta", "--config", str(tmp_path / "nope.cfg")]) == 2


def test_unknown_command_via_run_command():
    report = cli.run_command("explode", cli.parse_config(""))
    assert report.status == cli.INPUT_ERROR and report.exit_code == 2


def test_stdout_output(capsys):
    cfg = cli.parse_config("")
    report = cli.run_command("zeta", cfg)
    assert report.status == cli.OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0].startswith("quantity,") and len(lines) == 7
    assert all(len(next(csv.reader(io.StringIO(l)))) == 5 for l in lines)
