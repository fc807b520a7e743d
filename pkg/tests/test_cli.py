import json
import subprocess
import sys

import pytest

from bcom.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_homology_text(capsys):
    code, out, _ = run(capsys, "homology", "--group", "S3", "--tau", "zmod:2", "--ell", "2", "--max-degree", "3")
    assert code == 0
    assert out.strip().endswith("(1,3,3,3)")


def test_homology_json_and_csv(capsys):
    args = ["homology", "--group", "C2", "--tau", "z", "--ell", "2", "--max-degree", "2"]
    _, out, _ = run(capsys, *args, "--format", "json")
    assert json.loads(out)["dims"] == [1, 1, 1]
    _, out, _ = run(capsys, *args, "--format", "csv")
    assert out.splitlines() == ["degree,dim", "0,1", "1,1", "2,1"]


def test_compare(capsys):
    base = ["compare", "--group", "S3", "--from", "zmod:2", "--to", "z", "--max-degree", "2", "--format", "json"]
    _, out, _ = run(capsys, *base, "--ell", "2")
    assert json.loads(out)["iso"] is True
    _, out, _ = run(capsys, *base, "--ell", "3")
    assert json.loads(out)["iso"] is False


def test_decompose(capsys):
    code, out, _ = run(
        capsys, "decompose", "--group", "Q8", "--tau", "z", "--ell", "2", "--max-degree", "2",
        "--collection", "center", "--format", "json",
    )
    data = json.loads(out)
    assert code == 0 and data["iso"] and data["hocolim_dims"] == [1, 3, 3]


def test_verify_suite(capsys):
    code, out, _ = run(capsys, "verify", "sigma3")
    assert code == 0
    assert out.splitlines()[-1] == "4 passed, 0 failed"


def test_output_is_deterministic(capsys, tmp_path):
    paths = [tmp_path / "a.json", tmp_path / "b.json"]
    for p in paths:
        assert main(["verify", "so3", "--format", "json", "--output", str(p)]) == 0
    assert paths[0].read_bytes() == paths[1].read_bytes()


def test_exit_codes(capsys):
    assert run(capsys, "homology", "--group", "S3", "--tau", "bogus", "--ell", "2", "--max-degree", "1")[0] == 2
    assert run(capsys, "compare", "--group", "S3", "--from", "z", "--to", "zmod:2", "--ell", "2", "--max-degree", "1")[0] == 2
    code, _, err = run(capsys, "homology", "--group", "S3", "--tau", "z", "--ell", "2", "--max-degree", "3",
                       "--max-simplices", "10")
    assert code == 3 and "error" in err
    assert run(capsys, "group", "--group", "S7")[0] == 3


def test_caps_do_not_leak(capsys):
    run(capsys, "homology", "--group", "S3", "--tau", "z", "--ell", "2", "--max-degree", "3", "--max-simplices", "10")
    assert run(capsys, "homology", "--group", "S3", "--tau", "z", "--ell", "2", "--max-degree", "3")[0] == 0


def test_bad_prime_is_a_usage_error():
    with pytest.raises(SystemExit) as exc:
        main(["homology", "--group", "S3", "--tau", "z", "--ell", "4", "--max-degree", "1"])
    assert exc.value.code == 2


def test_group_json(capsys):
    _, out, _ = run(capsys, "group", "--group", "S3")
    data = json.loads(out)
    assert data["order"] == 6 and len(data["mul"]) == 6


def test_module_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "bcom.cli", "homology", "--group", "V4", "--tau", "z", "--ell", "2", "--max-degree", "1"],
        capture_output=True, text=True, check=True,
    )
    assert proc.stdout.strip().endswith("(1,2)")
