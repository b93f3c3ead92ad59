import json
import logging

import numpy as np
import pytest

from services.graph_io import (
    load_edge_list,
    load_ground_truth,
    load_problem,
    parse_edge_lines,
    write_edge_list,
    write_problem,
)
from services.synth import gen_erdos_renyi, perturb, relabel
from utils.errors import EdgeListError


def test_parse_skips_comments_and_blank_lines():
    parsed = parse_edge_lines(["# header", "", "0 1", "  2\t1  ", "3 3"])
    np.testing.assert_array_equal(parsed.pairs, [[0, 1], [2, 1]])
    assert parsed.max_id == 3
    assert parsed.self_loops == 1
    assert parsed.declared_nodes is None


def test_parse_reports_line_number():
    with pytest.raises(EdgeListError) as excinfo:
        parse_edge_lines(["0 1", "# ok", "1 2 3"], source="g.txt")
    assert excinfo.value.line_number == 3
    assert excinfo.value.path == "g.txt"
    assert str(excinfo.value).startswith("g.txt:3:")


@pytest.mark.parametrize("line", ["a b", "1", "-1 2", "1.5 2"])
def test_parse_rejects_malformed_lines(line):
    with pytest.raises(EdgeListError):
        parse_edge_lines([line])


def test_load_collapses_reversed_duplicates(tmp_path, caplog):
    path = tmp_path / "g.txt"
    path.write_text("0 1\n1 0\n1 2\n2 2\n", encoding="utf-8")
    with caplog.at_level(logging.WARNING):
        g = load_edge_list(path)
    assert g.num_nodes == 3
    assert g.edge_set() == {(0, 1), (1, 2)}
    assert "self-loop" in caplog.text


def test_nodes_header_keeps_isolated_nodes(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("# nodes 5\n0 1\n", encoding="utf-8")
    assert load_edge_list(path).num_nodes == 5


def test_empty_file_without_node_count_is_an_error(tmp_path):
    path = tmp_path / "empty.txt"
    path.write_text("# nothing here\n", encoding="utf-8")
    with pytest.raises(EdgeListError):
        load_edge_list(path)
    assert load_edge_list(path, num_nodes=3).num_nodes == 3


def test_node_count_override_too_small(tmp_path):
    path = tmp_path / "g.txt"
    path.write_text("0 4\n", encoding="utf-8")
    with pytest.raises(EdgeListError):
        load_edge_list(path, num_nodes=3)


def test_write_then_load_edge_list(tmp_path, asymmetric):
    path = tmp_path / "out" / "g.txt"
    write_edge_list(asymmetric, path, header="test graph")
    loaded = load_edge_list(path)
    assert loaded.num_nodes == asymmetric.num_nodes
    np.testing.assert_array_equal(loaded.edges, asymmetric.edges)


def test_problem_dump_round_trip(tmp_path):
    problem = relabel(perturb(gen_erdos_renyi(30, 4.0, seed=1), k=3, p_e=0.2, seed=2), seed=3)
    manifest = write_problem(problem, tmp_path / "problem")
    loaded = load_problem(manifest)

    assert loaded.k == 3
    assert loaded.seed == problem.seed
    assert loaded.p_e == problem.p_e
    assert loaded.ground_truth == problem.ground_truth
    for a, b in zip(loaded.instances, problem.instances):
        assert a.num_nodes == b.num_nodes
        np.testing.assert_array_equal(a.edges, b.edges)


def test_fully_deleted_problem_round_trip(tmp_path):
    problem = perturb(gen_erdos_renyi(5, 4.0, seed=0), k=2, p_e=1.0, seed=0)
    loaded = load_problem(write_problem(problem, tmp_path))
    assert [g.num_edges for g in loaded.instances] == [0, 0]
    assert loaded.instances[0].num_nodes == 5


def test_load_ground_truth_formats(tmp_path):
    plain = tmp_path / "truth.json"
    plain.write_text(json.dumps([[0, 1, 2], [2, 0, 1]]), encoding="utf-8")
    maps = load_ground_truth(plain, k=2)
    np.testing.assert_array_equal(maps[1], [2, 0, 1])

    manifest = tmp_path / "manifest.json"
    manifest.write_text(json.dumps({"ground_truth": [[0, 1], [1, 0]]}), encoding="utf-8")
    assert len(load_ground_truth(manifest, k=2)) == 2

    with pytest.raises(ValueError):
        load_ground_truth(plain, k=3)
