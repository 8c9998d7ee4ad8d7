from __future__ import annotations

import json

import pytest

from rhoext.cli import DEFAULTS, RunConfig, main, parse_window, read_config_file

SMALL = ["--window=-2..6,-4..4", "--weight-cap", "2", "--v-cap", "2", "--asigma-cap", "6", "--adams-cap", "2"]


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


def summary(out: str) -> dict:
    return json.loads(out.strip().splitlines()[-1])


def test_derive_coaction_n2(capsys):
    code, out = run(capsys, ["derive-coaction", "--n", "2"])
    assert code == 0
    assert "psi(t2) = t2|1 + e2|tau0 + e1^2|tau1" in out
    assert summary(out)["ok"] is True


def test_derive_coaction_n0(capsys):
    code, out = run(capsys, ["derive-coaction", "--n", "0"])
    assert code == 0
    assert "psi(t0) = t0|1" in out


def test_bss_to_0_shows_first_differential(capsys):
    code, out = run(capsys, ["bss", "--to", "0"] + SMALL)
    assert code == 0
    assert "d_1(u^1) = v0*a" in out


def test_bss_on_empty_window(capsys):
    code, out = run(capsys, ["bss", "--to", "0", "--window", "0..-1,0..-1"])
    assert code == 0
    assert "0 nonzero slices" in out


def test_bss_einfty_small(capsys):
    code, out = run(capsys, ["bss", "--einfty"] + SMALL)
    assert code == 0
    data = summary(out)["einfty"]
    assert data["mismatches"] == 0 and data["forbidden_nonempty"] == 0


def test_chart_writes_files(capsys, tmp_path):
    code, out = run(capsys, ["chart", "--weight", "2", "--out", str(tmp_path)] + SMALL)
    assert code == 0
    assert (tmp_path / "weight2_pageeinfty.svg").exists()
    tsv = (tmp_path / "weight2_pageeinfty.tsv").read_text()
    assert "hidden>2,1,e1*v1*a^2" in tsv
    assert (tmp_path / "chart_summary.json").exists()


@pytest.mark.parametrize("suite", ["massey", "cobar-d2", "restriction", "leibniz"])
def test_verify_suites_pass(capsys, suite):
    code, out = run(capsys, ["verify", "--suite", suite, "--samples", "50"] + SMALL)
    assert code == 0, out


def test_verify_massey_mentions_t0_squared(capsys):
    code, out = run(capsys, ["verify", "--suite", "massey"])
    assert code == 0
    assert "contains t0^2: True" in out


def test_verify_coassoc_trivial_comodule(capsys):
    code, out = run(capsys, ["verify", "--suite", "coassoc", "--comodule", "trivial", "--samples", "10"])
    assert code == 0
    assert "0 coassociativity/counit defects" in out


def test_verify_domain_check_small(capsys):
    code, out = run(capsys, ["verify", "--suite", "domain-check", "--k", "1", "--bound", "8"])
    assert code == 0


def test_failure_sets_exit_code(capsys):
    # the appendix ring is only defined for k >= 0
    code, out = run(capsys, ["verify", "--suite", "domain-check", "--k", "-1", "--bound", "4"])
    assert code == 1
    assert "FAIL" in out
    assert summary(out)["ok"] is False


def test_json_format_and_determinism(capsys):
    argv = ["ext-dump", "--format", "json", "--seed", "7"] + SMALL
    code1, out1 = run(capsys, argv)
    code2, out2 = run(capsys, argv)
    assert code1 == code2 == 0
    assert out1 == out2
    data = json.loads(out1)
    assert data["seed"] == 7
    assert len(data["config_hash"]) == 16


def test_bss_dump_has_page_column(capsys, tmp_path):
    code, _ = run(capsys, ["bss-dump", "--to", "1", "--out", str(tmp_path)] + SMALL)
    assert code == 0
    files = sorted(p.name for p in tmp_path.iterdir())
    tables = [f for f in files if f.endswith(".tsv")]
    assert tables
    header = (tmp_path / tables[0]).read_text().splitlines()
    assert any("page" in line for line in header[:3])


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# window for a quick run\nweight_cap = 2\nv_cap = 2\nasigma_cap = 6\nseed = 3\n")
    assert read_config_file(str(cfg))["seed"] == "3"
    code, out = run(capsys, ["ext-dump", "--config", str(cfg), "--seed", "5", "--format", "json", "--window=-2..4,-2..2"])
    assert code == 0
    data = json.loads(out)
    assert data["seed"] == 5
    assert data["window"]["weight_cap"] == 2


def test_bad_config_key(tmp_path):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n")
    with pytest.raises(ValueError):
        read_config_file(str(cfg))


def test_parse_window():
    assert parse_window("-4..12,-12..12") == ((-4, 12), (-12, 12))
    with pytest.raises(ValueError):
        parse_window("1..2")


def test_defaults_are_acceptance_window():
    cfg = RunConfig(dict(DEFAULTS))
    tr = cfg.trunc
    assert (tr.weight_cap, tr.v_cap, tr.a_cap, tr.stems, tr.sigmas) == (4, 4, 16, (-4, 12), (-12, 12))


def test_chart_display_flags(capsys, tmp_path):
    args = ["chart", "--weight", "2", "--chart-format", "svg", "--relabel-t0sq", "--show-high-v", "--out", str(tmp_path)]
    code, _ = run(capsys, args + SMALL)
    assert code == 0
    assert "labels show t0^2 as u*e1" in (tmp_path / "weight2_pageeinfty.svg").read_text()
