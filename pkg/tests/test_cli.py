import json
import subprocess
import sys

import jsonschema
import pytest

from zetaint.cli import PRECISION_ENV, main
from zetaint.report import REPORT_SCHEMA


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_eval_rational_monomial(capsys):
    code, out, _ = run(capsys, "eval", "--r", "2", "--s", "0", "--n", "1")
    assert code == 0
    assert "exact: -5/8" in out
    assert "series: -0.62499999999999999999" in out


def test_eval_diagonal_monomial_prints_form(capsys):
    code, out, _ = run(capsys, "eval", "--r", "1", "--s", "1", "--n", "0")
    assert code == 0
    assert "exact: ζ(2) - 1" in out
    assert "0.6449340668" in out


def test_eval_at_minus_one_gives_gamma(capsys):
    code, out, _ = run(capsys, "eval", "--z", "-1", "--format", "json")
    assert code == 0
    doc = json.loads(out)
    jsonschema.validate(doc, REPORT_SCHEMA)
    rec = doc["records"][0]
    assert rec["closed_form_value"]["re"].startswith("0.5772156649")
    methods = {v["method"] for v in rec["values"]}
    assert {"series", "reduce1d"} <= methods
    for v in rec["values"]:
        assert v["value"]["re"].startswith("0.5772156649")


def test_eval_complex_point_with_quad(capsys):
    code, out, _ = run(capsys, "eval", "--z", "1", "--z-imag", "1",
                       "--methods", "series,quad2d", "--format", "csv")
    assert code == 0
    assert out.splitlines()[0].startswith("spec,method_a,method_b")
    assert "quad2d" in out


@pytest.mark.parametrize(
    "argv",
    [
        ["eval"],
        ["eval", "--r", "1"],
        ["eval", "--r", "1", "--s", "0", "--n", "0", "--z", "0"],
        ["eval", "--z", "-2"],
        ["eval", "--z", "0", "--precision", "32"],
        ["eval", "--z", "0", "--tol", "0"],
        ["eval", "--z", "0", "--tol", "abc"],
        ["eval", "--z", "0", "--methods", "simpson"],
        ["verify-theorem1", "--r-max", "-1"],
        ["verify-conjecture", "--grid", "none"],
        ["verify-conjecture", "--point", "-3"],
        ["gamma-limit", "--offsets", "1e-2,1e-1"],
        ["gamma-limit", "--offsets", ""],
        ["verify-conjecture", "--jobs", "0"],
        ["nonsense"],
    ],
)
def test_usage_errors_exit_2(capsys, argv):
    with pytest.raises(SystemExit) as exc:
        code = main(argv)
        raise SystemExit(code)
    assert exc.value.code == 2


def test_verify_theorem1_exit_0(capsys):
    code, out, _ = run(capsys, "verify-theorem1", "--r-max", "2", "--s-max", "2",
                       "--n-max", "1", "--tol", "1e-20")
    assert code == 0
    assert out.strip().endswith("total=18 passed=18 failed=0")


def test_verify_theorem1_part_a(capsys):
    code, out, _ = run(capsys, "verify-theorem1", "--r-max", "3", "--s-max", "3",
                       "--n-max", "0", "--part", "a", "--format", "json")
    assert code == 0
    assert json.loads(out)["summary"]["total"] == 6


def test_verify_conjecture_explicit_points(capsys):
    code, out, _ = run(capsys, "verify-conjecture", "--grid", "none", "--point", "0.5",
                       "--point", "1:2")
    assert code == 0 and "passed=2" in out


def test_failed_verification_exits_1(capsys):
    # four offsets reach about 1e-11; asking for 1e-15 is a verdict failure, not misuse
    code, out, _ = run(capsys, "gamma-limit", "--offsets", "1e-1,1e-2,1e-3,1e-4",
                       "--limit-tol", "1e-15")
    assert code == 1
    assert out.startswith("FAIL")


def test_gamma_limit_command(capsys):
    code, out, _ = run(capsys, "gamma-limit", "--offsets", "1e-1,1e-2,1e-3,1e-4",
                       "--format", "json")
    assert code == 0
    extra = json.loads(out)["records"][0]["extra"]
    assert extra["extrapolated"].startswith("0.5772156")


def test_report_schema_command(capsys):
    code, out, _ = run(capsys, "report-schema")
    assert code == 0
    schema = json.loads(out)
    jsonschema.Draft202012Validator.check_schema(schema)


def test_output_file_and_io_error(tmp_path, capsys):
    target = tmp_path / "r.json"
    code, out, _ = run(capsys, "eval", "--r", "1", "--s", "0", "--n", "0",
                       "--format", "json", "--output", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["summary"]["passed"] == 1
    bad = tmp_path / "nope" / "r.json"
    code, _, err = run(capsys, "eval", "--r", "1", "--s", "0", "--n", "0",
                       "--output", str(bad))
    assert code == 1
    assert str(bad) in err


def test_precision_env_var(monkeypatch, capsys):
    monkeypatch.setenv(PRECISION_ENV, "128")
    code, out, _ = run(capsys, "eval", "--r", "1", "--s", "0", "--n", "0", "--format", "json")
    assert code == 0
    assert json.loads(out)["config"]["precision_bits"] == 128
    # the flag wins over the environment
    code, out, _ = run(capsys, "eval", "--r", "1", "--s", "0", "--n", "0", "--format", "json",
                       "--precision", "96")
    assert json.loads(out)["config"]["precision_bits"] == 96
    monkeypatch.setenv(PRECISION_ENV, "twelve")
    with pytest.raises(SystemExit) as exc:
        main(["eval", "--r", "1", "--s", "0", "--n", "0"])
    assert exc.value.code == 2


def test_decimal_inputs_not_routed_through_float(capsys):
    from zetaint.harness import rhs_value
    from zetaint.precision import PrecisionContext
    from zetaint.report import format_number

    code, out, _ = run(capsys, "eval", "--z", "-1.9", "--format", "json", "--methods", "series")
    doc = json.loads(out)
    ctx = PrecisionContext(256)
    digits = doc["config"]["digits"]
    exact = format_number(rhs_value("-1.9", ctx).real, digits)
    via_float = format_number(rhs_value(ctx.convert(-1.9), ctx).real, digits)
    assert exact != via_float
    assert doc["records"][0]["closed_form_value"]["re"] == exact


def test_console_script_entry_point():
    proc = subprocess.run([sys.executable, "-m", "zetaint.cli", "eval", "--r", "1", "--s", "0",
                           "--n", "0"], capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert "exact: 1" in proc.stdout
