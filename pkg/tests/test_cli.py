import json
import subprocess
import sys

import pytest

from morsecert.builders import Example, build_example
from morsecert.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, *argv):
    code, out, _ = run(capsys, *argv)
    return code, json.loads(out)


def test_certify_hexagon(capsys):
    code, data = run_json(capsys, "certify", "--example", "hexagon")
    assert code == 0
    assert data["order"] == 8
    assert all(data["checks"].values())


def test_finiteness_product_text(capsys):
    code, out, _ = run(capsys, "finiteness", "--example", "hexagon-product", "--format", "text")
    assert code == 0
    assert "type F_3 but not F_4" in out


def test_check_npc_raag(capsys):
    code, data = run_json(capsys, "check", "npc", "--example", "raag-3")
    assert code == 0
    assert (data["verdict"], data["rule"]) == ("NPC", "product-of-NPC")
    assert data["link_flag"]["flag"] is True


def test_check_morse(capsys):
    code, data = run_json(capsys, "check", "morse", "--example", "hexagon")
    assert code == 0 and data["image_index"] == 1


def test_failed_check_exit_one(capsys, tmp_path):
    ex = build_example("hexagon")
    data = ex.to_dict()
    data["weighting"]["weights"]["x1"] = 2
    path = tmp_path / "bad.json"
    path.write_text(json.dumps(data))
    code, out = run_json(capsys, "certify", "--example", str(path))
    assert code == 1
    assert out["conclusion"] is None
    assert "equivariant" in out["failed_checks"]


def test_usage_errors(capsys):
    assert run(capsys, "certify", "--example", "nonsense")[0] == 2
    assert run(capsys, "certify")[0] == 2
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 2
    assert run(capsys, "oracle", "conjugacy", "--g", "0", "--h", "1", "--max-len", "9")[0] == 2


def test_link_and_homology(capsys):
    code, data = run_json(capsys, "link", "--example", "hexagon", "--ascending")
    assert code == 0 and len(data["link"]["vertices"]) == 8
    code, data = run_json(capsys, "homology", "--example", "hexagon", "--descending")
    assert data["text"] == "H~1 = Z"


def test_homology_input_file(capsys, tmp_path):
    path = tmp_path / "s.json"
    path.write_text(json.dumps({"vertices": ["a", "b", "c"], "simplices": [["a", "b"], ["b", "c"], ["a", "c"]]}))
    code, data = run_json(capsys, "homology", "--input", str(path))
    assert code == 0 and data["text"] == "H~1 = Z"


def test_witnesses(capsys):
    code, data = run_json(capsys, "witnesses", "--count", "4")
    assert code == 0
    assert [w["iota"] for w in data["witnesses"]] == [0, 1, 2, 3]
    assert data["witnesses"][3]["element"] == {"coords": ["a^3 b^-3", "1"], "flip": True}


def test_oracle(capsys):
    code, data = run_json(capsys, "oracle", "conjugacy", "--g", "0", "--h", "1", "--max-len", "4")
    assert code == 1 and data["result"] == "exhausted"
    code, data = run_json(capsys, "oracle", "conjugacy", "--g", "2", "--h", "2", "--max-len", "2")
    assert code == 0 and data["result"] == {"coords": ["1", "1"], "flip": False}


def test_aut_commands(capsys):
    assert run_json(capsys, "aut", "verify", "--rank", "6")[1]["all_hold"]
    assert run_json(capsys, "aut", "abelianize", "--endo", "phi1")[1]["matrix"] == [[2, 1], [1, 1]]
    code, data = run_json(capsys, "aut", "pingpong")
    assert code == 0 and data["replay"] is True
    assert run(capsys, "aut", "inner", "--endo", "psi1")[0] == 1
    endo = json.dumps({"rank": 2, "images": {"x1": "x2 x1 x2^-1", "x2": "x2"}})
    code, data = run_json(capsys, "aut", "inner", "--endo", endo)
    assert code == 0 and data["conjugator"] == "x2"


def test_output_deterministic(capsys):
    first = run(capsys, "certify", "--example", "hexagon-product")[1]
    second = run(capsys, "certify", "--example", "hexagon-product")[1]
    assert first == second


@pytest.mark.parametrize("name", ["raag-1", "raag-2", "raag-3", "hexagon", "hexagon-product"])
def test_build_round_trip_bit_identical(capsys, tmp_path, name):
    path = tmp_path / f"{name}.json"
    code, _, _ = run(capsys, "build", "--example", name, "--out", str(path))
    assert code == 0
    text = path.read_text()
    again = Example.from_dict(json.loads(text))
    assert json.dumps(again.to_dict(), indent=2, ensure_ascii=False) + "\n" == text
    code, direct = run_json(capsys, "certify", "--example", name)
    code2, replayed = run_json(capsys, "certify", "--example", str(path))
    assert code == code2 == 0
    direct.pop("example"), replayed.pop("example")
    assert direct == replayed


def test_console_script():
    out = subprocess.run(
        [sys.executable, "-m", "morsecert.cli", "witnesses", "--count", "2", "--format", "text"],
        capture_output=True, text=True, check=True,
    )
    assert "n=1: (a b^-1, 1; flip)" in out.stdout
