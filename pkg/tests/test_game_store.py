import json

import pytest

from gamesep.errors import FormatError, InvalidStructureError
from gamesep.game_store import JsonStore, load_fdhgraph, load_game, load_hgraph, save_game
from gamesep.gamegen import gen_best_shot_ring, gen_coordination
from gamesep.hypergraph import FDHGraph, HGraph
from gamesep.models import GameFile
from gamesep.scalars import ScalarMode


def test_saved_games_load_back(tmp_path, half):
    path = tmp_path / "game.json"
    u = gen_best_shot_ring(4, half)
    save_game(u, path)
    assert load_game(path).equals(u)
    document = json.loads(path.read_text())
    assert document["utilities"][0][8] == "1/2"
    assert load_game(path, ScalarMode.FLOAT).utilities[0][1, 0, 0, 0] == 0.5


def test_saved_output_is_stable(tmp_path, ring3):
    first, second = tmp_path / "a.json", tmp_path / "b.json"
    save_game(gen_coordination(ring3), first)
    save_game(gen_coordination(ring3), second)
    assert first.read_bytes() == second.read_bytes()
    assert JsonStore(first).digest() == JsonStore(second).digest()


def test_graph_files(tmp_path):
    h = tmp_path / "h.json"
    h.write_text(json.dumps({"nodes": 3, "hyperlinks": [[0, 1], [2]]}))
    assert load_hgraph(h) == HGraph.of(3, [{0, 1}, {2}])
    f = tmp_path / "f.json"
    f.write_text(json.dumps({"nodes": 3, "hyperlinks": [{"tail": 0, "head": [1, 2]}]}))
    assert load_fdhgraph(f) == FDHGraph.of(3, [(0, {1, 2})])


def test_format_errors(tmp_path):
    with pytest.raises(FormatError):
        JsonStore(tmp_path / "missing.json").load()
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"actions": [2, 0], "utilities": [[], []]}))
    with pytest.raises(FormatError):
        JsonStore(bad).load_model(GameFile)
    link = tmp_path / "loop.json"
    link.write_text(json.dumps({"nodes": 2, "hyperlinks": [{"tail": 0, "head": [0]}]}))
    with pytest.raises(InvalidStructureError):
        load_fdhgraph(link)
