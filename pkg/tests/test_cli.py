import json
import subprocess
import sys

import numpy as np
import pytest

from lorentz_mannheim import cli, report


def _spec(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj) if not isinstance(obj, str) else obj)
    return str(p)


@pytest.fixture
def specs(tmp_path):
    return {
        "helix": _spec(tmp_path, "helix.json", {"family": "timelike_helix", "params": [1.0, 2.0]}),
        "line": _spec(tmp_path, "line.json", {"family": "line", "params": [0, 0, 0, 1, 0, 0]}),
        "base": _spec(tmp_path, "base.json", {"family": "mannheim_partner", "params": [1, 1.0, 0.5, 1.2]}),
        "bad": _spec(tmp_path, "bad.json", "{not json"),
        "plane": _spec(tmp_path, "plane.json", {"family": "planar_spacelike", "params": [1.0]}),
    }


def test_frenet_exit_codes(specs, tmp_path):
    out = str(tmp_path / "f.csv")
    assert cli.main(["frenet", specs["helix"], "--out", out]) == 0
    assert cli.main(["frenet", specs["line"]]) == 3
    assert cli.main(["frenet", specs["bad"]]) == 2
    assert cli.main(["frenet", specs["helix"], "--samples", "3"]) == 2
    assert cli.main(["frenet", specs["helix"], "--tol", "bogus=1"]) == 2


def test_partner_conventions(specs, tmp_path):
    out = str(tmp_path / "p.json")
    assert cli.main(["partner", specs["base"], "--lambda", "1", "--format", "json", "--out", out]) == 1
    rep = report.parse_json(open(out, "rb").read())
    failed = sorted(v.name for v in rep.verdicts if not v.passed)
    assert "identity_ii" in failed and "fm_property" not in failed
    assert cli.main(["partner", specs["base"], "--lambda", "1", "--convention", "derived",
                     "--out", out]) == 0


def test_partner_errors(specs):
    assert cli.main(["partner", specs["base"], "--lambda", "0"]) == 2
    assert cli.main(["partner", specs["base"]]) == 2
    assert cli.main(["partner", specs["plane"], "--lambda", "0.3"]) == 3
    assert cli.main(["partner", specs["base"], "--lambda", "1", "--mu", "+1"]) == 3


def test_partner_then_verify(specs, tmp_path):
    stem = str(tmp_path / "pair")
    cli.main(["partner", specs["base"], "--lambda", "1", "--out", stem])
    for suffix in (".partner.json", ".partner.csv", ".corr.csv"):
        assert (tmp_path / ("pair" + suffix)).exists()
    argv = ["verify", stem + ".partner.json", specs["base"], "--convention", "derived",
            "--out", str(tmp_path / "v.csv")]
    # default pairing is s = s*, which is not the partner correspondence (speeds differ)
    assert cli.main(argv) == 1
    assert cli.main(argv + ["--correspondence", stem + ".corr.csv"]) == 0


def test_wm_check_and_sweep(specs, tmp_path):
    stem = str(tmp_path / "pair")
    cli.main(["partner", specs["base"], "--lambda", "1", "--out", stem])
    out = str(tmp_path / "wm.json")
    assert cli.main(["wm-check", stem + ".partner.json", specs["base"],
                     "--correspondence", stem + ".corr.csv", "--format", "json", "--out", out]) == 0
    assert json.load(open(out))["Z"] == []
    sw = str(tmp_path / "sw.csv")
    assert cli.main(["sweep", specs["helix"], "--lambdas", "0.1:2.9:15", "--case", "1", "--out", sw]) == 0
    lines = open(sw).read().splitlines()
    assert lines[1].startswith("lambda,") and len(lines) == 17
    assert cli.main(["sweep", specs["helix"], "--lambdas", "0.1:0.9:0"]) == 2
    assert cli.main(["sweep", specs["helix"], "--lambdas", "0,1"]) == 2
    assert cli.main(["sweep", specs["helix"], "--lambdas", "0.5"]) == 2  # case 1 or 2: ambiguous


def test_bad_correspondence(specs, tmp_path):
    corr = _spec(tmp_path, "c.csv", "a,b\n1,2\n")
    assert cli.main(["verify", specs["helix"], specs["helix"], "--correspondence", corr]) == 2
    rev = "s,s_star\n" + "\n".join(f"{x},{x}" for x in np.linspace(5, 0, 10)) + "\n"
    assert cli.main(["wm-check", specs["helix"], specs["helix"],
                     "--correspondence", _spec(tmp_path, "r.csv", rev)]) == 3


def test_signature_flag_invariants(specs, tmp_path):
    outs = []
    for sig in ("ppm", "mpp"):
        out = tmp_path / f"f_{sig}.json"
        assert cli.main(["frenet", specs["helix"], "--signature", sig, "--format", "json",
                         "--out", str(out)]) == 0
        rep = report.parse_json(out.read_bytes())
        outs.append((rep.data["kappa"], rep.data["tau"]))
    assert np.allclose(outs[0][0], outs[1][0]) and np.allclose(outs[0][1], outs[1][1])


def test_module_entry_point(specs):
    r = subprocess.run([sys.executable, "-m", "lorentz_mannheim", "frenet", specs["helix"],
                        "--samples", "20"], capture_output=True)
    assert r.returncode == 0
    assert r.stdout.splitlines()[1].startswith(b"s,kappa,tau")
