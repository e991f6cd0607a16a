"""
Artifacts module for ShapeletBoard
Handles JSON documents, CSV exports and run manifests
"""

import csv
import hashlib
import json
import logging
from pathlib import Path

import numpy as np
import pandas as pd

from config import MANIFEST_VERSION, TOOL_NAME, TOOL_VERSION, get_current_time
from errors import DataError

logger = logging.getLogger(__name__)

MANIFEST_COLUMNS = ["path", "command", "created_at", "duration_seconds", "outputs"]


def to_jsonable(obj):
    """Convert numpy types to native Python types for JSON serialization"""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Path):
        return str(obj)
    return obj


def write_json(path, document):
    """Write a JSON document; identical input gives identical bytes"""
    path = Path(path)
    text = json.dumps(to_jsonable(document), indent=2, sort_keys=True) + "\n"
    try:
        path.write_text(text, encoding="utf-8")
    except OSError as e:
        raise DataError(f"{path}: {e}") from e


def read_json(path, version=None):
    """Read a JSON document, optionally checking its version field"""
    try:
        document = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, ValueError) as e:
        raise DataError(f"{path}: {e}") from e
    if not isinstance(document, dict):
        raise DataError(f"{path}: expected a JSON object")
    if version is not None and document.get("version") != version:
        raise DataError(f"{path}: expected version {version!r}, found {document.get('version')!r}")
    return document


def file_sha256(path):
    digest = hashlib.sha256()
    try:
        with open(path, "rb") as handle:
            for block in iter(lambda: handle.read(1 << 20), b""):
                digest.update(block)
    except OSError as e:
        raise DataError(f"{path}: {e}") from e
    return digest.hexdigest()


def write_matrix_csv(path, rows):
    """Headerless CSV, one row per line; rows may differ in length"""
    try:
        with open(path, "w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            for row in rows:
                writer.writerow([repr(float(v)) for v in row])
    except OSError as e:
        raise DataError(f"{path}: {e}") from e


def write_frame_csv(path, frame, header=True):
    try:
        frame.to_csv(path, index=False, header=header)
    except OSError as e:
        raise DataError(f"{path}: {e}") from e


def manifest_path_for(output_path):
    """<stem>.manifest.json next to the primary output"""
    output_path = Path(output_path)
    return output_path.with_name(f"{output_path.stem}.manifest.json")


def build_manifest(command, config, inputs, outputs, duration_seconds, threads=1):
    """Everything needed to re-execute a run"""
    return {
        "version": MANIFEST_VERSION,
        "tool": TOOL_NAME,
        "tool_version": TOOL_VERSION,
        "command": command,
        "config": config,
        "threads": threads,
        "inputs": [
            {"path": str(path), "sha256": file_sha256(path)} for path in inputs if path
        ],
        "outputs": [str(path) for path in outputs],
        "duration_seconds": round(float(duration_seconds), 6),
        "created_at": get_current_time().isoformat(),
    }


def list_documents(runs_dir, version):
    """All JSON documents under runs_dir carrying the given version field"""
    found = []
    for path in sorted(Path(runs_dir).glob("**/*.json")):
        try:
            document = read_json(path)
        except DataError:
            logger.debug("Skipping unreadable %s", path)
            continue
        if document.get("version") == version:
            found.append((path, document))
    return found


def list_manifests(runs_dir):
    """Run manifests as a DataFrame, newest first"""
    rows = [
        {
            "path": str(path),
            "command": doc.get("command", ""),
            "created_at": doc.get("created_at", ""),
            "duration_seconds": doc.get("duration_seconds", 0.0),
            "outputs": ", ".join(doc.get("outputs", [])),
        }
        for path, doc in list_documents(runs_dir, MANIFEST_VERSION)
    ]
    if not rows:
        return pd.DataFrame(columns=MANIFEST_COLUMNS)
    return pd.DataFrame(rows).sort_values("created_at", ascending=False, ignore_index=True)
