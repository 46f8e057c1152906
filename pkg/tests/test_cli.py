import json

import pytest

from kzfusion.cli import execute_config, main, parse_module_spec, parse_target_spec
from kzfusion.errors import KzFusionError
from kzfusion.liealg import algebra_to_dict, sl2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, json.loads(out) if out.strip().startswith("{") else out


def test_fusion_exit_codes(capsys):
    code, report = run(capsys, "fusion", "--level", "4", "--finite", "2", "2", "0")
    assert code == 2 and report["verdict"] == "unknown"
    assert ["2", "6"] in report["witnesses"]

    code, report = run(capsys, "fusion", "--level", "-1/2",
                       "--mixed", "1", "-3/2", "-1/2")
    assert code == 0 and report["verdict"] == "one"

    code, report = run(capsys, "fusion", "--level", "generic",
                       "--finite", "1", "1", "2")
    assert code == 0 and report["verdict"] == "one"

    code, report = run(capsys, "fusion", "--level", "-1/2",
                       "--dense", "0", "-3/8")
    assert code == 0 and report["verdict"] == "one"

    assert main(["fusion", "--level", "4", "--finite", "2", "2"]) == 1
    assert main(["fusion", "--level", "nonsense", "--finite", "1", "1", "2"]) == 1


def test_kz_full_build(capsys):
    code, report = run(capsys, "kz", "--level", "-1/2", "--u1", "finite:1",
                       "--u2", "hw:-3/2:14", "--target", "verma:-1/2", "-N", "3")
    assert code == 0
    assert report["checks"] == {"commutator_components": True,
                                "series_recursion_residual": True}
    assert report["prefix"]["built_to"] == 3
    assert report["prefix"]["obstructions"]["entries"] == []


def test_kz_obstructed_exit_three(capsys):
    code, report = run(capsys, "kz", "--level", "4", "--u1", "finite:2",
                       "--u2", "finite:2", "--target", "verma:0", "-N", "2")
    assert code == 3
    assert report["prefix"]["built_to"] == 0
    assert report["prefix"]["obstructions"]["entries"][0]["N"] == 1
    # partial maps are still verified and written
    assert report["checks"]["commutator_components"] is True


def test_kz_contragredient_exit_zero(capsys):
    code, report = run(capsys, "kz", "--level", "4", "--u1", "finite:2",
                       "--u2", "finite:2", "--target", "contragredient:0",
                       "-N", "2")
    assert code == 0
    assert report["prefix"]["built_to"] == 2
    assert report["checks"]["commutator_components"] is True
    assert report["checks"]["series_recursion_residual"] is True


def test_candidate_reports(capsys):
    code, report = run(capsys, "candidate", "--level", "4",
                       "--p", "2", "--q", "2", "--r", "0")
    assert code == 0
    assert report["degree"] == 1 and report["all_zero"] is True
    assert all(c["diagnostics"]["is_zero"] for c in report["candidates"])

    code, report = run(capsys, "candidate", "--level", "0",
                       "--p", "2", "--q", "3", "--r", "1")
    assert code == 0
    assert report["degree"] == 4
    assert report["candidates"][0]["conformal_weight"] == "35/8"

    assert main(["candidate", "--level", "generic",
                 "--p", "2", "--q", "2", "--r", "0"]) == 1
    assert main(["candidate", "--level", "7",
                 "--p", "1", "--q", "1", "--r", "2"]) == 1  # unobstructed


def test_reports_roundtrip_bit_identically(capsys):
    cases = [
        ["fusion", "--level", "4", "--finite", "2", "2", "0"],
        ["fusion", "--level", "-1/2", "--dense", "0", "-3/8"],
        ["kz", "--level", "4", "--u1", "finite:1", "--u2", "finite:1",
         "--target", "verma:2", "-N", "2"],
        ["candidate", "--level", "4", "--p", "2", "--q", "2", "--r", "0"],
        ["algebra", "validate"],
    ]
    for argv in cases:
        main(argv)
        first = capsys.readouterr().out
        report = json.loads(first)
        again = execute_config(report["config"])
        assert json.dumps(report, sort_keys=True) == json.dumps(again, sort_keys=True)


def test_algebra_validate_builtin_and_file(capsys, tmp_path):
    code, report = run(capsys, "algebra", "validate")
    assert code == 0 and report["valid"] is True
    assert report["checks"]["casimir_on_adjoint"] is True

    path = tmp_path / "alg.json"
    path.write_text(json.dumps(algebra_to_dict(sl2())))
    code, report = run(capsys, "algebra", "validate", "--algebra", str(path))
    assert code == 0 and report["valid"] is True

    bad = algebra_to_dict(sl2())
    bad["gram"][1][1] = "3"  # breaks invariance
    path.write_text(json.dumps(bad))
    code, report = run(capsys, "algebra", "validate", "--algebra", str(path))
    assert code == 1 and report["valid"] is False


def test_batch_stream(capsys, tmp_path):
    lines = [
        {"command": "fusion", "level": "4",
         "query": {"kind": "finite", "p": 2, "q": 2, "r": 0}},
        {"command": "fusion", "level": "-1/2",
         "query": {"kind": "mixed", "p": 1, "lam": "-3/2", "mu": "-1/2"}},
        {"command": "fusion", "level": "generic",
         "query": {"kind": "doubly_infinite", "lam1": "-3/4", "lam2": "-3/4",
                   "lam3": "-3/2"}},
    ]
    path = tmp_path / "queries.jsonl"
    path.write_text("\n".join(json.dumps(x) for x in lines) + "\n")
    code = main(["batch", str(path)])
    out = capsys.readouterr().out.strip().splitlines()
    verdicts = [json.loads(line)["verdict"] for line in out]
    assert verdicts == ["unknown", "one", "one"]
    assert code == 2  # worst exit code across the batch


def test_output_file_and_env_dir(capsys, tmp_path, monkeypatch):
    target = tmp_path / "report.json"
    main(["fusion", "--level", "4", "--finite", "2", "2", "0",
          "--output", str(target)])
    capsys.readouterr()
    assert json.loads(target.read_text())["verdict"] == "unknown"

    monkeypatch.setenv("KZFUSION_OUTPUT_DIR", str(tmp_path))
    main(["fusion", "--level", "generic", "--finite", "1", "1", "2"])
    capsys.readouterr()
    assert json.loads((tmp_path / "fusion.json").read_text())["verdict"] == "one"


def test_spec_parsers():
    assert parse_module_spec("finite:2") == {"kind": "finite", "p": 2}
    assert parse_module_spec("hw:-3/2") == \
        {"kind": "highest", "lam": "-3/2", "depth": 12}
    assert parse_module_spec("dense:0:-3/8:5") == \
        {"kind": "dense", "lam": "0", "delta": "-3/8", "radius": 5}
    assert parse_target_spec("contragredient:0") == \
        {"kind": "contragredient", "lam3": "0"}
    with pytest.raises(KzFusionError):
        parse_module_spec("spam:1")
    with pytest.raises(KzFusionError):
        parse_target_spec("verma")
