import json
from fractions import Fraction

import pytest

from gamesep.cli import main
from gamesep.config import get_settings


def run(capsys, *argv):
    code = main(list(argv))
    return code, capsys.readouterr().out


def write_json(path, document):
    path.write_text(json.dumps(document), encoding="utf-8")
    return str(path)


@pytest.fixture
def coordination_file(tmp_path, capsys):
    path = tmp_path / "coordination.json"
    code, _ = run(capsys, "gen", "coordination", "--n", "3", "--out", str(path))
    assert code == 0
    return str(path)


def test_gen_then_decompose(tmp_path, capsys):
    game = tmp_path / "best_shot.json"
    assert run(capsys, "gen", "best-shot-ring", "--n", "4", "--c", "1/3", "--out", str(game))[0] == 0
    out_dir = tmp_path / "parts"
    code, stdout = run(capsys, "decompose", str(game), "--out-dir", str(out_dir))
    assert code == 0 and stdout == ""
    report = json.loads((out_dir / "report.json").read_text())
    assert all(report["checks"].values())
    assert set(report["checks"]) >= {"reconstruction", "harmonic_is_harmonic", "component_separability"}
    harmonic = json.loads((out_dir / "harmonic.json").read_text())
    assert harmonic["component"] == "harmonic"
    assert harmonic["actions"] == [2, 2, 2, 2]
    assert (out_dir / "potential.json").exists() and (out_dir / "nonstrategic.json").exists()


def test_output_is_deterministic(coordination_file, capsys):
    first = run(capsys, "analyze", coordination_file)
    second = run(capsys, "analyze", coordination_file)
    assert first == second
    report = json.loads(first[1])
    assert report["is_potential"] is True
    assert "timing_seconds" not in report


def test_analyze_text(coordination_file, capsys):
    code, text = run(capsys, "analyze", coordination_file, "--format", "text")
    assert code == 0
    assert "potential game: yes" in text
    assert "harmonic component is zero: True" in text


def test_minimal_fdh_with_terms(coordination_file, tmp_path, capsys):
    terms = tmp_path / "terms.json"
    code, stdout = run(capsys, "minimal-fdh", coordination_file, "--terms", str(terms))
    assert code == 0
    report = json.loads(stdout)
    assert report["minimal_fdh"]["nodes"] == 3
    assert len(report["graph"]["links"]) == 6
    assert len(json.loads(terms.read_text())["terms"]) == 6


def test_potential_witness(tmp_path, capsys):
    game = tmp_path / "pennies.json"
    run(capsys, "gen", "matching-pennies", "--out", str(game))
    code, stdout = run(capsys, "potential", str(game))
    assert code == 0
    report = json.loads(stdout)
    assert report["is_potential"] is False
    assert abs(Fraction(report["witness"]["circulation"])) == 8
    assert report["witness"]["cycle"][0] == report["witness"]["cycle"][-1]


def test_float_generation(capsys):
    code, stdout = run(capsys, "gen", "coordination", "--n", "3", "--float")
    assert code == 0
    document = json.loads(stdout)
    assert document["scalar"] == "float"
    assert isinstance(document["utilities"][0][0], float)


def test_mrf_factorize(tmp_path, capsys):
    distribution = write_json(
        tmp_path / "p.json",
        {"actions": [2, 2, 2], "probabilities": [0.1, 0.1, 0.05, 0.25, 0.1, 0.1, 0.05, 0.25]},
    )
    graph = write_json(tmp_path / "g.json", {"nodes": 3, "links": [[0, 1], [1, 0], [1, 2], [2, 1]]})
    code, stdout = run(capsys, "mrf-factorize", distribution, graph)
    assert code == 0
    result = json.loads(stdout)
    assert [factor["clique"] for factor in result["factors"]] == [[0, 1], [1, 2]]
    assert result["max_relative_error"] <= 1e-6


def test_truncated_file_exits_2(tmp_path, capsys):
    path = tmp_path / "broken.json"
    path.write_text('{"actions": [2', encoding="utf-8")
    assert run(capsys, "analyze", str(path))[0] == 2


def test_float_literal_in_rational_file_exits_2(tmp_path, capsys):
    path = write_json(tmp_path / "g.json", {"actions": [2], "scalar": "rational", "utilities": [[0.5, 1]]})
    assert run(capsys, "minimal-fdh", path)[0] == 2


def test_wrong_table_length_exits_2(tmp_path, capsys):
    path = write_json(tmp_path / "g.json", {"actions": [2, 2], "utilities": [[1, 2, 3, 4], [1, 2]]})
    assert run(capsys, "potential", path)[0] == 2


def test_bad_generator_parameters_exit_2(capsys):
    assert run(capsys, "gen", "best-shot", "--c", "3/2")[0] == 2
    assert run(capsys, "gen", "coordination", "--zeta", "1,0,-1,1")[0] == 2


def test_size_guard_exits_4(coordination_file, monkeypatch, capsys):
    monkeypatch.setenv("GAMESEP_MAX_PROFILES", "4")
    get_settings.cache_clear()
    assert run(capsys, "analyze", coordination_file)[0] == 4


def test_float_file_is_read_as_float(tmp_path, capsys):
    path = write_json(
        tmp_path / "g.json",
        {"actions": [2, 2], "scalar": "float", "utilities": [[0.5, 0.5, 1.0, 1.0], [0.25, 1.5, 0.25, 1.5]]},
    )
    code, stdout = run(capsys, "minimal-fdh", path)
    assert code == 0
    assert json.loads(stdout)["minimal_fdh"]["hyperlinks"] == []
