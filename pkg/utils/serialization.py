"""JSON and CSV writers with byte-stable output"""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Any, Iterable, List, Sequence, Union

from pydantic import BaseModel

from models.alignment import Alignment
from models.factors import FactorSet
from models.metrics import MetricsReport

PathLike = Union[str, Path]


def to_jsonable(payload: Any) -> Any:
    """Pydantic models (also nested in dicts and lists) to plain JSON values"""
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    if isinstance(payload, dict):
        return {str(key): to_jsonable(value) for key, value in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [to_jsonable(value) for value in payload]
    return payload


def dumps(payload: Any) -> str:
    return json.dumps(to_jsonable(payload), sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def write_json(path: PathLike, payload: Any) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(payload), encoding="utf-8")
    return path


def write_csv(path: PathLike, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
    """UTF-8 CSV with a header row and '\\n' line endings; None becomes an empty cell"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", encoding="utf-8", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(header)
        for row in rows:
            writer.writerow(row)
    return path


def write_models_csv(path: PathLike, models: Sequence[BaseModel], header: Sequence[str]) -> Path:
    """One row per model, columns in ``header`` order"""
    rows = []
    for model in models:
        data = model.model_dump(mode="json")
        rows.append([data[name] for name in header])
    return write_csv(path, header, rows)


def alignment_payload(a: Alignment) -> List[List[int]]:
    return [list(row) for row in a.tuples]


def write_alignment_csv(path: PathLike, a: Alignment) -> Path:
    header = [f"mode_{i}" for i in range(a.k)]
    return write_csv(path, header, alignment_payload(a))


def read_alignment_json(path: PathLike) -> Alignment:
    """Read either a bare list of tuples or an object with an "alignment" key"""
    payload = json.loads(Path(path).read_text(encoding="utf-8"))
    if isinstance(payload, dict):
        if "alignment" not in payload:
            raise ValueError(f"{path}: no \"alignment\" key")
        payload = payload["alignment"]
    if not payload:
        raise ValueError(f"{path}: alignment is empty, cannot infer k")
    return Alignment(tuples=[tuple(row) for row in payload], k=len(payload[0]))


def write_metrics_csv(path: PathLike, report: MetricsReport) -> Path:
    header = list(MetricsReport.model_fields)
    return write_models_csv(path, [report], header)


def write_factor_bundle(out_dir: PathLike, f: FactorSet) -> Path:
    """manifest.json plus factor_<i>.csv (rows = nodes, columns = rank terms)"""
    out_dir = Path(out_dir)
    files = []
    for i, u in enumerate(f.factors):
        name = f"factor_{i}.csv"
        write_csv(out_dir / name, [f"term_{j}" for j in range(f.rank)], (map(repr, row.tolist()) for row in u))
        files.append(name)

    manifest = {
        "alpha": f.alpha,
        "iterations": f.iterations,
        "rank": f.rank,
        "sizes": f.sizes,
        "factors": files,
    }
    return write_json(out_dir / "manifest.json", manifest)
