"""Edge-list reading and writing, plus problem dumps"""

from __future__ import annotations

import json
import logging
import re
from pathlib import Path
from typing import Iterable, List, NamedTuple, Optional, Tuple, Union

import numpy as np

from models.graph import Graph
from models.problem import ProblemInstance
from utils.errors import EdgeListError
from utils.serialization import write_json

logger = logging.getLogger(__name__)

PathLike = Union[str, Path]

NODES_HEADER = re.compile(r"^#\s*nodes\s+(\d+)\s*$")


class ParsedEdgeList(NamedTuple):
    pairs: np.ndarray
    max_id: int
    self_loops: int
    declared_nodes: Optional[int] = None


def parse_edge_lines(lines: Iterable[str], source: Optional[str] = None) -> ParsedEdgeList:
    """Parse "u v" lines; '#' lines and blank lines are skipped

    A "# nodes N" comment declares the node count, so isolated trailing
    nodes survive a write/read cycle.
    """
    pairs: List[Tuple[int, int]] = []
    self_loops = 0
    max_id = -1
    declared: Optional[int] = None

    for line_number, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            match = NODES_HEADER.match(line)
            if match and declared is None:
                declared = int(match.group(1))
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise EdgeListError(f"expected 2 node ids, found {len(tokens)} tokens", source, line_number)
        try:
            u, v = int(tokens[0]), int(tokens[1])
        except ValueError:
            raise EdgeListError(f"non-integer node id in {line!r}", source, line_number) from None
        if u < 0 or v < 0:
            raise EdgeListError(f"negative node id in {line!r}", source, line_number)

        max_id = max(max_id, u, v)
        if u == v:
            self_loops += 1
            continue
        pairs.append((u, v))

    arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
    return ParsedEdgeList(pairs=arr, max_id=max_id, self_loops=self_loops, declared_nodes=declared)


def load_edge_list(path: PathLike, num_nodes: Optional[int] = None) -> Graph:
    """Read an undirected graph from a UTF-8 edge-list file

    Node count is ``num_nodes`` if given, else the "# nodes N" header, else
    1 + the largest id.
    Reversed and repeated lines collapse to one edge; self-loops are dropped.
    """
    path = Path(path)
    with path.open("r", encoding="utf-8") as handle:
        parsed = parse_edge_lines(handle, source=str(path))

    if num_nodes is None:
        num_nodes = parsed.declared_nodes
    if parsed.max_id < 0 and num_nodes is None:
        raise EdgeListError("edge list contains no edges", str(path))
    if parsed.self_loops:
        logger.warning("%s: dropped %d self-loop line(s)", path, parsed.self_loops)

    inferred = parsed.max_id + 1
    if num_nodes is None:
        num_nodes = inferred
    elif num_nodes < inferred:
        raise EdgeListError(f"num_nodes={num_nodes} but node id {parsed.max_id} is present", str(path))

    graph = Graph.from_edges(num_nodes, parsed.pairs)
    logger.debug("loaded %s: %d nodes, %d edges", path, graph.num_nodes, graph.num_edges)
    return graph


def write_edge_list(graph: Graph, path: PathLike, header: Optional[str] = None) -> None:
    """Write one "u v" line per undirected edge (u < v), sorted"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="\n") as handle:
        handle.write(f"# nodes {graph.num_nodes}\n")
        if header:
            handle.write(f"# {header}\n")
        for u, v in graph.edges:
            handle.write(f"{u} {v}\n")


def write_problem(problem: ProblemInstance, out_dir: PathLike) -> Path:
    """Dump a problem as edge lists plus manifest.json; returns the manifest path"""
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    write_edge_list(problem.reference, out_dir / "reference.txt", header="reference graph")
    instance_files = []
    for i, g in enumerate(problem.instances):
        name = f"instance_{i}.txt"
        write_edge_list(g, out_dir / name, header=f"instance {i}")
        instance_files.append(name)

    manifest = {
        "num_nodes": problem.num_nodes,
        "k": problem.k,
        "seed": problem.seed,
        "p_e": problem.p_e,
        "reference": "reference.txt",
        "instances": instance_files,
        "ground_truth": problem.ground_truth,
    }
    return write_json(out_dir / "manifest.json", manifest)


def load_problem(manifest_path: PathLike) -> ProblemInstance:
    """Read a problem written by ``write_problem``"""
    manifest_path = Path(manifest_path)
    manifest = json.loads(manifest_path.read_text(encoding="utf-8"))
    base = manifest_path.parent
    n = int(manifest["num_nodes"])
    return ProblemInstance(
        reference=load_edge_list(base / manifest["reference"], num_nodes=n),
        instances=[load_edge_list(base / name, num_nodes=n) for name in manifest["instances"]],
        ground_truth=manifest["ground_truth"],
        seed=int(manifest["seed"]),
        p_e=float(manifest["p_e"]),
    )


def load_ground_truth(path: PathLike, k: int) -> List[np.ndarray]:
    """Load per-network truth maps from a problem manifest or a JSON list of lists"""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    maps = payload["ground_truth"] if isinstance(payload, dict) else payload
    if len(maps) != k:
        raise ValueError(f"ground truth has {len(maps)} maps, expected {k}")
    return [np.asarray(m, dtype=np.int64) for m in maps]
