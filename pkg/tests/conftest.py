from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from canvas.seed import DATA_FILE, build_seed_store
from canvas.store import CanvasStore


@pytest.fixture()
def seed_store():
    """In-memory store holding the shipped seed corpus."""
    store = build_seed_store()
    yield store
    store.close()


@pytest.fixture()
def seeded_dir(tmp_path):
    """Data directory with the seed corpus imported."""
    data_dir = tmp_path / "data"
    with CanvasStore(data_dir) as store:
        store.import_records(DATA_FILE)
    return data_dir


@pytest.fixture()
def client(seeded_dir):
    from fastapi.testclient import TestClient

    from canvas.service import create_app

    store = CanvasStore(seeded_dir)
    try:
        yield TestClient(create_app(store))
    finally:
        store.close()


@pytest.fixture()
def empty_store():
    from canvas.regions import default_table

    store = CanvasStore()
    for record in default_table().to_records():
        store.regions.add(record["code"], record["name"], record["members"])
    yield store
    store.close()
