"""Binary dataset codec: round trips, record arithmetic, decode errors."""

import json

import pytest

from cood.gridworld import (
    DatasetDecodeError,
    World,
    encode_record,
    generate_dataset,
    read_dataset,
    record_size,
    write_dataset,
)


@pytest.fixture(scope="module")
def small_ds():
    return generate_dataset(World.ROTATE, seed=9, train_count=12, test_count=4, grid=16)


def test_record_size_at_g32():
    assert record_size(32) == 2060
    assert record_size(16) == 2 * 16 * 16 + 12


def test_round_trip_equality(small_ds, tmp_path):
    root = write_dataset(small_ds, tmp_path / "ds")
    back = read_dataset(root)
    assert back == small_ds


def test_written_files_present(small_ds, tmp_path):
    root = write_dataset(small_ds, tmp_path / "ds")
    names = {p.name for p in root.iterdir()}
    assert names == {"manifest.json", "train.bin", "test_d0.bin", "test_d1.bin", "test_d2.bin"}
    manifest = json.loads((root / "manifest.json").read_text())
    assert manifest["format_version"] == 1
    assert manifest["world"] == "rotate"
    assert manifest["counts"]["train"] == 12


def test_rewrite_is_byte_identical(small_ds, tmp_path):
    a = write_dataset(small_ds, tmp_path / "a")
    b = write_dataset(small_ds, tmp_path / "b")
    for name in ("manifest.json", "train.bin", "test_d1.bin"):
        assert (a / name).read_bytes() == (b / name).read_bytes()


def test_encode_record_length(small_ds):
    rec = encode_record(small_ds.splits["train"][0], 16)
    assert len(rec) == record_size(16)


def test_corrupt_color_byte_names_record(small_ds, tmp_path):
    root = write_dataset(small_ds, tmp_path / "ds")
    path = root / "train.bin"
    data = bytearray(path.read_bytes())
    rec = record_size(16)
    data[3 * rec + 10] = 7  # a pixel byte of record 3
    path.write_bytes(bytes(data))
    with pytest.raises(DatasetDecodeError, match="record 3") as err:
        read_dataset(root)
    assert "7" in str(err.value)


def test_version_mismatch_rejected(small_ds, tmp_path):
    root = write_dataset(small_ds, tmp_path / "ds")
    manifest = json.loads((root / "manifest.json").read_text())
    manifest["format_version"] = 99
    (root / "manifest.json").write_text(json.dumps(manifest))
    with pytest.raises(DatasetDecodeError, match="version"):
        read_dataset(root)


def test_truncated_file_rejected(small_ds, tmp_path):
    root = write_dataset(small_ds, tmp_path / "ds")
    path = root / "test_d2.bin"
    path.write_bytes(path.read_bytes()[:-5])
    with pytest.raises(DatasetDecodeError, match="bytes"):
        read_dataset(root)


def test_missing_manifest_rejected(tmp_path):
    with pytest.raises(DatasetDecodeError, match="manifest"):
        read_dataset(tmp_path)
