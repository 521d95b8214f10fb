from utils import atomic_write_bytes, atomic_write_text, cleanup_file, ensure_directory


def test_ensure_directory_creates_parents(tmp_path):
    path = ensure_directory(tmp_path / "a" / "b")
    assert path.is_dir()
    assert ensure_directory(path) == path


def test_atomic_write_replaces_and_leaves_no_temporaries(tmp_path):
    target = tmp_path / "out" / "model.ckpt"
    atomic_write_bytes(target, b"first")
    atomic_write_text(target, "second")
    assert target.read_text() == "second"
    assert [p.name for p in target.parent.iterdir()] == ["model.ckpt"]


def test_cleanup_file(tmp_path):
    target = tmp_path / "x.tmp"
    target.write_text("x")
    cleanup_file(target)
    assert not target.exists()
    cleanup_file(target)
