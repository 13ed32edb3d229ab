import subprocess
import sys

import pytest

from chrono.cli import main


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def parse(text):
    meta, rows = {}, []
    for line in text.splitlines():
        if line.startswith("# "):
            k, v = line[2:].split("=", 1)
            meta[k] = v
        else:
            rows.append(line.split(","))
    return meta, rows[0], rows[1:]


def test_coercivity_first_column(capsys):
    code, out, _ = run(["coercivity", "--T", "1", "--p", "2", "--mu", "10", "--levels", "8"], capsys)
    assert code == 0
    meta, header, rows = parse(out)
    assert header[-1] == "constant" and len(rows) == 8
    printed = [0.237, 0.206, 0.194, 0.188, 0.186, 0.185, 0.184, 0.184]
    assert all(abs(float(r[-1]) - v) <= 0.005 for r, v in zip(rows, printed))


def test_empty_levels_is_validation_error(capsys):
    code, _, err = run(["coercivity", "--levels", "0"], capsys)
    assert code == 2 and "level" in err


def test_h2_norm(capsys):
    code, out, _ = run(["coercivity", "--norm", "h2", "--levels", "2"], capsys)
    meta, _, rows = parse(out)
    assert code == 0 and meta["norm"] == "H2" and len(rows) == 2


def test_unknown_case(capsys):
    code, _, err = run(["ode-converge", "--case", "nope", "--levels", "1"], capsys)
    assert code == 2 and "unknown case" in err


def test_bad_regularity(capsys):
    code, _, err = run(["ode-converge", "--p", "2", "--regularity", "2", "--levels", "1"], capsys)
    assert code == 2


def test_single_level_has_no_rates(capsys):
    code, out, _ = run(["ode-converge", "--p", "2", "--levels", "1"], capsys)
    meta, header, rows = parse(out)
    assert code == 0 and len(rows) == 1
    assert not any(k.startswith("rate_") for k in meta)


def test_ode_rates_reported(capsys):
    code, out, _ = run(["ode-converge", "--p", "3", "--regularity", "max", "--levels", "3"], capsys)
    meta, header, rows = parse(out)
    assert header == ["p", "k", "N", "h", "L2", "H1", "H2"]
    hs = [float(r[3]) for r in rows]
    assert hs == sorted(hs, reverse=True)
    assert abs(float(meta["rate_p3_H1"]) - 3) < 0.3


def test_polynomial_projection_is_exact(capsys):
    code, out, _ = run(["projection-study", "--case", "half_t2", "--p", "2,3", "--levels", "2"], capsys)
    _, _, rows = parse(out)
    assert code == 0 and all(float(r[-1]) < 1e-12 for r in rows)


def test_nodal_mode(capsys):
    code, out, _ = run(["projection-study", "--mode", "nodal", "--p", "3", "--levels", "4"], capsys)
    meta, _, _ = parse(out)
    assert abs(float(meta["rate_p3_nodal"]) - 4) <= 0.25


def test_pde_zero_case(capsys):
    code, out, _ = run(["pde", "stability", "--case", "zero", "--sweeps", "2"], capsys)
    _, header, rows = parse(out)
    assert code == 0 and len(rows) == 2
    assert all(v == "0" for r in rows for v in r[4:])


def test_numerical_failure_exit_code(capsys, monkeypatch):
    from chrono import cli
    from chrono.errors import SingularMatrixError

    def boom(args):
        raise SingularMatrixError("zero pivot")

    monkeypatch.setattr(cli, "cmd_coercivity", boom)
    code, _, err = run(["coercivity"], capsys)
    assert code == 1 and "SingularMatrixError" in err and "zero pivot" in err


def test_deterministic_output_and_file(tmp_path, capsys):
    args = ["ode-converge", "--p", "2", "--levels", "2"]
    a = tmp_path / "a.csv"
    b = tmp_path / "b.csv"
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    assert b"\r" not in a.read_bytes()


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "chrono", "coercivity", "--levels", "1"],
                         capture_output=True, text=True, env={"CHRONO_THREADS": "1", "PATH": ""})
    assert res.returncode == 0 and res.stdout.startswith("# experiment=coercivity\n")
