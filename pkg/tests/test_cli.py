import io

import pytest

from main import main
from plgroup_module.constructions.builders import (GeneratorFamily, WreathCert, alpha, bcert_check,
                                                   beta, beta0)
from plgroup_module.core.plmap import IDENTITY, PLMap
from plgroup_module.utils.serialization import dumps, loads


@pytest.fixture
def ploi(tmp_path, capsys):
    """Run the CLI quietly; returns (exit code, stdout, stderr)"""

    def run(*argv):
        code = main(["--log-level", "CRITICAL", "--log-file", str(tmp_path / "ploi.log"), *argv])
        captured = capsys.readouterr()
        return code, captured.out, captured.err

    return run


@pytest.fixture
def files(tmp_path):
    def write(name, data):
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else dumps(data), encoding="utf-8")
        return str(path)

    return write


def test_build_and_eval(ploi, files, tmp_path):
    code, out, _ = ploi("build", "beta", "1")
    assert code == 0
    assert PLMap.from_dict(loads(out)) == beta(1)

    path = files("b1.json", out)
    assert ploi("eval", "--map", path, "--at", "7/16")[1] == "9/16\n"
    assert ploi("eval", "--map", path, "--at", "9/16", "--inverse")[1] == "7/16\n"


def test_build_writes_out_file(ploi, tmp_path):
    target = tmp_path / "alpha.json"
    code, out, _ = ploi("build", "alpha", "--out", str(target))
    assert code == 0 and out == ""
    assert PLMap.from_dict(loads(target.read_text(encoding="utf-8"))) == alpha()


def test_build_beta_family(ploi):
    code, out, _ = ploi("build", "betas", "--ks", "2,0,0")
    assert code == 0
    family = GeneratorFamily.from_dict(loads(out))
    assert family.label.value == "BETA"
    assert family.members == (beta(0), beta(2))

    code, _, err = ploi("build", "betas", "--ks", "0,x")
    assert code == 2
    assert loads(err)["error"] == "InputFormatError"


def test_build_needs_parameter(ploi):
    code, _, err = ploi("build", "gamma")
    assert code == 2
    assert loads(err)["error"] == "InputFormatError"


def test_family_output_is_deterministic(ploi):
    first = ploi("build", "gamma", "2")[1]
    second = ploi("build", "gamma", "2")[1]
    assert first == second
    assert GeneratorFamily.from_dict(loads(first)).valid


def test_map_arithmetic(ploi, files):
    a = files("a.json", alpha().to_dict())
    b0 = files("b0.json", beta0().to_dict())
    assert PLMap.from_dict(loads(ploi("compose", a, b0)[1])) == alpha() * beta0()
    assert PLMap.from_dict(loads(ploi("conj", b0, a)[1])) == beta(1)
    assert PLMap.from_dict(loads(ploi("power", b0, "-2")[1])) == beta0().power(-2)
    assert loads(ploi("orbitals", a)[1]) == [{"left": "0/1", "right": "1/2"},
                                             {"left": "1/2", "right": "1/1"}]


def test_inverse_from_stdin(ploi, monkeypatch):
    monkeypatch.setattr("sys.stdin", io.StringIO(dumps(beta0().to_dict())))
    code, out, _ = ploi("inverse")
    assert code == 0
    assert PLMap.from_dict(loads(out)) == beta0().inverse()


def test_bad_map_exits_with_json_error(ploi, files):
    path = files("bad.json", {"breakpoints": [["0/1", "0/1"], ["1/2", "1/3"], ["1/1", "9/10"]]})
    code, out, err = ploi("eval", "--map", path, "--at", "1/2")
    assert code == 2 and out == ""
    payload = loads(err)
    assert payload["error"] == "EndpointError"
    assert payload["exit_code"] == 2


def test_float_point_is_refused(ploi, files):
    path = files("b0.json", beta0().to_dict())
    assert ploi("eval", "--map", path, "--at", "0.5")[0] == 2


def test_extract_b_then_certify(ploi, files, tmp_path):
    gens = files("gens.json", [alpha().to_dict(), beta0().to_dict()])
    result = tmp_path / "b.json"
    assert ploi("extract-b", "--gens", gens, "--out", str(result))[0] == 0
    assert loads(result.read_text(encoding="utf-8"))["certificate"]["kind"] == "b_certificate"

    code, out, _ = ploi("certify", "b", "--file", str(result))
    assert code == 0
    assert loads(out) == {"kind": "certify", "certificate": "b", "valid": True}


def test_corrupted_wreath_is_rejected(ploi, files):
    good = WreathCert.certify([beta(0), beta(1)]).to_dict()
    assert ploi("certify", "wreath", "--file", files("good.json", good))[0] == 0

    bad = dict(good, levels=list(reversed(good["levels"])))
    code, _, err = ploi("certify", "wreath", "--file", files("bad.json", bad))
    assert code == 3
    assert loads(err)["error"] == "CertificateRejected"


def test_certify_checks_the_record_kind(ploi, files):
    path = files("family.json", WreathCert.certify([beta(0), beta(1)]).to_dict())
    assert ploi("certify", "family", "--file", path)[0] == 2


def test_ball_cap_exits_with_budget_code(ploi, files):
    gens = files("gens.json", [alpha().to_dict(), beta0().to_dict()])
    code, _, err = ploi("--max-elements", "5", "analyze", "--gens", gens, "--radius", "3")
    assert code == 4
    assert loads(err)["error"] == "BudgetExceeded"


def test_analyze_report(ploi, files, tmp_path):
    gens = files("gens.json", {"generators": [beta0().to_dict(), beta(1).to_dict()]})
    report = tmp_path / "report.json"
    assert ploi("analyze", "--gens", gens, "--radius", "2", "--report", str(report))[0] == 0
    data = loads(report.read_text(encoding="utf-8"))
    assert data["kind"] == "report"
    assert data["transition_chain"] is None
    assert data["depth_lower_bound"] == 2


def test_tower_to_wn_from_generators(ploi, files):
    gens = files("gens.json", [beta0().to_dict(), beta(1).to_dict()])
    code, out, _ = ploi("tower-to-wn", "--gens", gens, "--radius", "2", "--height", "2")
    assert code == 0
    family = GeneratorFamily.from_dict(loads(out))
    assert family.valid and len(family.members) == 2


def test_plot(ploi, files):
    path = files("b0.json", beta0().to_dict())
    code, out, _ = ploi("plot", path, "--names", "beta0")
    assert code == 0
    assert out.startswith("<svg")
    assert 'id="beta0"' in out


def test_plot_writes_svg_file(ploi, files, tmp_path):
    path = files("b0.json", beta0().to_dict())
    target = tmp_path / "plots" / "b0.svg"
    code, out, _ = ploi("plot", path, "--names", "beta0", "--out", str(target))
    assert code == 0 and out == ""
    text = target.read_text(encoding="utf-8")
    assert text.startswith("<svg") and 'id="beta0"' in text


def test_settings_with_bad_budget(ploi, files):
    path = files("settings.json", {"search": {"radius": 0}})
    code, _, err = ploi("--settings", path, "build", "alpha")
    assert code == 2
    assert "budgets" in loads(err)["message"]


def test_perturbed_breakpoint_is_rejected(ploi, files):
    cert = WreathCert.certify([beta(0), beta(1)]).to_dict()
    # widen β₀'s support to (5/16, 9/16): β₁ no longer clears it
    cert["levels"][0]["breakpoints"][1] = ["5/16", "5/16"]
    assert ploi("certify", "wreath", "--file", files("bent.json", cert))[0] == 3


def test_uncleared_b_certificate_is_rejected(ploi, files):
    cert = bcert_check(beta0(), IDENTITY).to_dict()
    assert ploi("certify", "b", "--file", files("flat.json", cert))[0] == 3
