import json
import os
import tempfile
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional

import numpy as np

from wavelab import __version__


def make_rng(seed: int, stream: int = 0) -> np.random.Generator:
    """
    Return a generator for one independent stream of a run.

    Streams derived from the same base seed never overlap, so sample loops
    can be split across workers without changing results.
    """
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(stream,)))


def read_json_file(json_path: Path) -> Dict[str, Any]:
    """
    Read a JSON file from disk and return the parsed object.
    Raises FileNotFoundError if the file does not exist.
    """
    with open(json_path, "r") as f:
        return json.load(f)


def atomic_write_text(path: Path, text: str) -> Path:
    """
    Write text to `path` through a temporary file in the same directory.

    Args:
        path: Destination file. Parent directories are created.
        text: Full file contents.

    Returns:
        The destination path.
    """
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise
    return path


def to_jsonable(obj: Any) -> Any:
    """Convert numpy scalars and arrays nested in dicts/lists to plain Python."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return str(obj)
    return obj


def write_json_atomic(path: Path, payload: Dict[str, Any]) -> Path:
    text = json.dumps(to_jsonable(payload), indent=2, sort_keys=True) + "\n"
    return atomic_write_text(path, text)


def file_header(seed: int, tolerances: Dict[str, float]) -> Dict[str, Any]:
    return {"version": __version__, "seed": seed, "tolerances": dict(sorted(tolerances.items()))}


def write_csv_atomic(
    path: Path,
    columns: List[str],
    rows: Iterable[Iterable[float]],
    seed: int,
    tolerances: Dict[str, float],
    extra_header: Optional[Dict[str, Any]] = None,
) -> Path:
    """
    Write a numeric CSV file whose first lines are `#`-prefixed metadata.

    Values are printed with `repr` precision so identical runs give
    byte-identical files.
    """
    header = file_header(seed, tolerances)
    if extra_header:
        header.update(extra_header)
    lines = [f"# {key}={json.dumps(to_jsonable(value), sort_keys=True)}" for key, value in header.items()]
    lines.append(",".join(columns))
    for row in rows:
        lines.append(",".join(repr(float(value)) for value in row))
    return atomic_write_text(path, "\n".join(lines) + "\n")


def write_markdown_atomic(
    path: Path,
    body: str,
    seed: int,
    tolerances: Dict[str, float],
    extra_header: Optional[Dict[str, Any]] = None,
) -> Path:
    """Markdown with the same metadata as the CSV writers, as leading `<!-- -->` lines."""
    header = file_header(seed, tolerances)
    if extra_header:
        header.update(extra_header)
    lines = [f"<!-- {key}={json.dumps(to_jsonable(value), sort_keys=True)} -->" for key, value in header.items()]
    return atomic_write_text(path, "\n".join(lines) + "\n\n" + body)
