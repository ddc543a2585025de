import json

import pytest

from bkkernel.cli import EXIT_BUDGET, EXIT_PASS, EXIT_USAGE, build_config, build_parser, main
from bkkernel.group import ClassTable, StandardGroupSpec


def run(args, capsys):
    code = main(args)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_kernel_identity_passes(tmp_path, capsys):
    w = tmp_path / "id.txt"
    w.write_text("1 0\n0 1\n")
    out = tmp_path / "report.json"
    code, _, _ = run(["kernel", "--spec", "2", "--q", "3", "--weights", str(w), "--mode", "both", "--out", str(out)], capsys)
    assert code == EXIT_PASS
    rep = json.loads(out.read_text())
    assert rep["pass"] is True
    assert set(rep) >= {"classes", "geometric", "spectral", "max_dev", "pass"}
    assert len(rep["geometric"]) == 8 and len(rep["geometric"][0]) == 2


def test_kernel_single_modes(tmp_path, capsys):
    w = tmp_path / "sym2.txt"
    w.write_text("2 0\n1 1\n0 2\n")
    for mode in ("geometric", "spectral"):
        code, out, _ = run(["kernel", "--q", "3", "--weights", str(w), "--mode", mode], capsys)
        assert code == EXIT_PASS
        rep = json.loads(out)
        assert rep[mode] is not None


def test_output_is_byte_identical(capsys):
    outs = [run(["chartab", "--spec", "2", "--q", "3"], capsys)[1] for _ in range(2)]
    assert outs[0] == outs[1]
    assert json.loads(outs[0])["degrees"] == [1, 1, 2, 2, 2, 3, 3, 4]


def test_invalid_q_is_a_usage_error(capsys):
    code, _, err = run(["classes", "--spec", "2", "--q", "6"], capsys)
    assert code == EXIT_USAGE
    assert "prime power" in err


def test_budget_error_reports_size(capsys):
    code, _, err = run(["classes", "--spec", "3", "--q", "3", "--budget", "100"], capsys)
    assert code == EXIT_BUDGET
    assert "11232" in err


def test_bad_weights_are_a_usage_error(tmp_path, capsys):
    w = tmp_path / "bad.txt"
    w.write_text("1 0\n")
    code, _, _ = run(["kernel", "--q", "3", "--weights", str(w)], capsys)
    assert code == EXIT_USAGE


def test_unknown_subcommand_exits_two():
    with pytest.raises(SystemExit) as info:
        main(["nope"])
    assert info.value.code == 2


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# settings\nq = 5\nspec = 2\ntol = 1e-7\n")
    args = build_parser().parse_args(["kernel", "--config", str(cfg), "--q", "3"])
    conf = build_config(args)
    assert conf.q == 3 and conf.tol == 1e-7 and conf.p == 3
    cfg.write_text("colour = red\n")
    args = build_parser().parse_args(["kernel", "--config", str(cfg)])
    with pytest.raises(ValueError):
        build_config(args)


def test_other_subcommands(capsys):
    code, out, _ = run(["classes", "--spec", "1", "--q", "3"], capsys)
    assert code == 0 and len(json.loads(out)["classes"]) == 2
    code, out, _ = run(["green", "--n", "2", "--q", "3"], capsys)
    assert code == 0 and out.splitlines()[1] == "2,1,-2"
    code, out, _ = run(["dl", "--spec", "2", "--q", "3", "--torus", "2", "--theta", "0"], capsys)
    one = ClassTable(StandardGroupSpec.gl(2, 3)).identity
    assert code == 0 and json.loads(out)["values"][one] == [-2.0, 0.0]
    code, out, _ = run(["series", "--spec", "2", "--q", "3"], capsys)
    assert sorted(len(s["members"]) for s in json.loads(out)["series"]) == [1, 1, 1, 1, 2, 2]
    code, out, _ = run(["gamma", "--spec", "2", "--q", "3"], capsys)
    assert code == 0 and len(json.loads(out)["gamma"]) == 6


def test_selftest_quick(tmp_path, capsys):
    out = tmp_path / "self.json"
    code, text, _ = run(["selftest", "--level", "quick", "--only", "A1,A6", "--out", str(out)], capsys)
    assert code == EXIT_PASS
    assert "A1 PASS" in text and "A6 PASS" in text
    assert json.loads(out.read_text())["pass"] is True
