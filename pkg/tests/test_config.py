import os

from src import config
from src.dependency_manager import (
    DEV_REQUIREMENTS,
    RUNTIME_REQUIREMENTS,
    missing_requirements,
    read_requirements,
    requirement_name,
)

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))


def test_data_paths(tmp_path, monkeypatch):
    monkeypatch.delenv("CASIMIR_GOLDEN_DIR", raising=False)
    paths = config.get_data_paths(str(tmp_path))
    assert paths["goldens"] == os.path.join(str(tmp_path), "data", "goldens")
    assert paths["schema"].endswith("report_schema.json")


def test_golden_dir_override(tmp_path, monkeypatch):
    monkeypatch.setenv("CASIMIR_GOLDEN_DIR", str(tmp_path))
    assert config.get_data_paths()["goldens"] == str(tmp_path)
    assert config.get_verify_defaults()["golden_dir"] == str(tmp_path)


def test_verify_defaults():
    defaults = config.get_verify_defaults()
    assert defaults["k"] == [1, 2, 3, 4, 5]
    assert defaults["ktype_bound"] == 50
    assert set(defaults) >= {"tol", "seed", "jobs", "quad_limit", "jacobi_nodes", "timings"}


def test_requirement_name():
    assert requirement_name("sympy>=1.12") == "sympy"
    assert requirement_name("jsonschema[format]==4.0") == "jsonschema"
    assert requirement_name("python-dotenv") == "python-dotenv"


def test_missing_requirements(tmp_path):
    req = tmp_path / "requirements.txt"
    req.write_text("# stack\npython-dotenv\nsympy\nsurely-not-a-real-package-xyz\n")
    assert missing_requirements(str(req)) == ["surely-not-a-real-package-xyz"]


def test_dev_requirements_include_the_runtime_set(tmp_path):
    (tmp_path / "requirements.txt").write_text("sympy\nsurely-not-a-real-package-xyz\n")
    dev = tmp_path / "requirements-dev.txt"
    dev.write_text("-r requirements.txt\npytest\n")
    assert read_requirements(str(dev)) == ["sympy", "surely-not-a-real-package-xyz", "pytest"]
    assert missing_requirements(str(dev)) == ["surely-not-a-real-package-xyz"]


def test_pytest_is_not_a_runtime_requirement():
    runtime = [requirement_name(r) for r in read_requirements(os.path.join(ROOT, RUNTIME_REQUIREMENTS))]
    dev = [requirement_name(r) for r in read_requirements(os.path.join(ROOT, DEV_REQUIREMENTS))]
    assert "pytest" not in runtime
    assert "pytest" in dev
    assert set(runtime) <= set(dev)
