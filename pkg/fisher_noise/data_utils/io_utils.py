"""
------------------------------------------------------------------------------
Author:         Justin Vinh
Parent Package: fisher_noise
Creation Date:  2026.10.02
Last Modified:  2026.10.18

Purpose:
Contains functions to import JSON documents and to output JSON/CSV results.
Every output file is written to a temporary sibling first and renamed into
place, so it is either complete or absent.
------------------------------------------------------------------------------
"""

import os
from pathlib import Path
import tempfile
from typing import Any

import orjson
import pandas as pd

JSON_OPTIONS = orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS | orjson.OPT_SERIALIZE_NUMPY
CSV_FLOAT_FORMAT = "%.17g"


def load_json(path_name) -> Any:
    """
    Loads the given JSON file.
    Raises FileNotFoundError for a bad path and ValueError if the file
    cannot be decoded.
    """
    # Handles incorrect path names, raises an error if there is a bad path
    path = Path(path_name)
    if not path.is_file():
        raise FileNotFoundError(f"File {path_name} not found")

    try:
        return orjson.loads(path.read_bytes())
    except orjson.JSONDecodeError as e:
        raise ValueError(f"Invalid JSON format in file: {path}") from e


def dump_json(doc: Any) -> bytes:
    return orjson.dumps(doc, option=JSON_OPTIONS) + b"\n"


def write_bytes(path_name, payload: bytes) -> Path:
    """Atomically replace path_name with payload"""
    path = Path(path_name)
    path.parent.mkdir(parents=True, exist_ok=True)

    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
    try:
        with os.fdopen(fd, "wb") as tmp:
            tmp.write(payload)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def write_json(path_name, doc: Any) -> Path:
    return write_bytes(path_name, dump_json(doc))


def write_csv(path_name, df: pd.DataFrame) -> Path:
    """Writes df without its index, floats at full round-trip precision"""
    text = df.to_csv(index=False, float_format=CSV_FLOAT_FORMAT, lineterminator="\n")
    return write_bytes(path_name, text.encode("utf-8"))
