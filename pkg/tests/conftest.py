import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from simpguard.corpus import (
    load_distortion_dataset,
    load_documents,
    load_grounding_dataset,
    load_spurious_dataset,
)
from simpguard.ensemble import init_mlp, save_model
from simpguard.pipeline import PipelineConfig, build_suite

DATA_DIR = Path(__file__).parent / "data"
GOLDEN_DIR = DATA_DIR / "golden"


@pytest.fixture(scope="session")
def data_dir() -> Path:
    return DATA_DIR


@pytest.fixture(scope="session")
def golden_dir() -> Path:
    return GOLDEN_DIR


@pytest.fixture()
def mock_config() -> PipelineConfig:
    return PipelineConfig()


@pytest.fixture()
def mock_suite(mock_config):
    return build_suite(mock_config)


@pytest.fixture(scope="session")
def documents():
    return load_documents(DATA_DIR / "documents.jsonl")


@pytest.fixture(scope="session")
def spurious_records():
    records, _ = load_spurious_dataset(DATA_DIR / "spurious.jsonl")
    return records


@pytest.fixture(scope="session")
def distortion_records():
    return load_distortion_dataset(DATA_DIR / "distortion.jsonl")


@pytest.fixture(scope="session")
def grounding_records():
    return load_grounding_dataset(DATA_DIR / "grounding.jsonl")


@pytest.fixture(scope="session")
def spurious_model_path(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("models") / "spurious.model.json"
    save_model(init_mlp((8, 16, 8, 1), seed=42), path)
    return path


@pytest.fixture(scope="session")
def distortion_model_path(tmp_path_factory) -> Path:
    path = tmp_path_factory.mktemp("models") / "distortion.model.json"
    save_model(init_mlp((30, 32, 16, 15), seed=42), path)
    return path
