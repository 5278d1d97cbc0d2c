import importlib.util
import os
import subprocess
import sys

# Distribution names whose import name differs
IMPORT_NAMES = {
    "python-dotenv": "dotenv",
}

RUNTIME_REQUIREMENTS = "requirements.txt"
# Test tooling lives apart from the runtime set and is never auto-installed.
DEV_REQUIREMENTS = "requirements-dev.txt"


def requirement_name(line):
    """'sympy>=1.12' -> 'sympy'; handles ==, >=, <=, ~= and extras."""
    for sep in ("==", ">=", "<=", "~=", "[", ";"):
        line = line.split(sep)[0]
    return line.strip()


def read_requirements(req_file):
    """Requirement lines of a file, following '-r other.txt' includes."""
    requirements = []
    with open(req_file, "r") as f:
        for line in f:
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            if line.startswith("-r"):
                included = os.path.join(os.path.dirname(req_file), line[2:].strip())
                requirements.extend(read_requirements(included))
                continue
            requirements.append(line)
    return requirements


def missing_requirements(req_file):
    missing = []
    for req in read_requirements(req_file):
        pkg_name = requirement_name(req)
        import_name = IMPORT_NAMES.get(pkg_name, pkg_name.replace("-", "_"))
        if importlib.util.find_spec(import_name) is None:
            missing.append(req)
    return missing


def check_and_install_dependencies():
    """
    Check that the packages in requirements.txt are importable; if any are
    missing, run pip install -r requirements.txt.

    Called once from app.py at startup. A failed install is reported and
    left to the import that needs the package.
    """
    base_dir = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
    req_file = os.path.join(base_dir, RUNTIME_REQUIREMENTS)

    if not os.path.exists(req_file):
        print(f"Warning: requirements.txt not found at {req_file}")
        return

    missing = missing_requirements(req_file)
    if not missing:
        return

    print(f"Missing dependencies found: {', '.join(missing)}")
    print("Installing missing packages...")
    try:
        subprocess.check_call([sys.executable, "-m", "pip", "install", "-r", req_file])
        print("Dependencies installed successfully.")
    except subprocess.CalledProcessError as e:
        print(f"Error installing dependencies: {e}")


if __name__ == "__main__":
    check_and_install_dependencies()
