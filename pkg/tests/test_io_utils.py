import numpy as np
import pandas as pd
import pytest

from fisher_noise.data_utils.io_utils import (
    dump_json,
    load_json,
    write_bytes,
    write_csv,
    write_json,
)


def test_load_json_missing_file(tmp_path):
    with pytest.raises(FileNotFoundError):
        load_json(tmp_path / "missing.json")


def test_load_json_invalid(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("[1, 2")
    with pytest.raises(ValueError, match="Invalid JSON"):
        load_json(path)


def test_json_is_sorted_and_serializes_numpy(tmp_path):
    path = write_json(tmp_path / "out" / "doc.json", {"b": np.array([0.5, 1.0]), "a": 1})
    text = path.read_text()
    assert text.index('"a"') < text.index('"b"')
    assert load_json(path) == {"a": 1, "b": [0.5, 1.0]}
    assert dump_json({"x": 1}).endswith(b"\n")


def test_writes_leave_no_temporary_files(tmp_path):
    write_bytes(tmp_path / "a.bin", b"first")
    write_bytes(tmp_path / "a.bin", b"second")
    assert [p.name for p in tmp_path.iterdir()] == ["a.bin"]
    assert (tmp_path / "a.bin").read_bytes() == b"second"


def test_csv_keeps_full_precision(tmp_path):
    values = [0.1, 1 / 3, np.pi * 1e-9]
    path = write_csv(tmp_path / "w.csv", pd.DataFrame({"w": values}))
    assert path.read_text().splitlines()[0] == "w"
    assert pd.read_csv(path, float_precision="round_trip")["w"].tolist() == values
