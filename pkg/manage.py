"""
Task runner for the cubeham project.

Usage:
    python manage.py test        # Fast test suite (slow tests deselected)
    python manage.py test-all    # Every test, including the slow ones
    python manage.py coverage    # Tests with a coverage report for src/
    python manage.py lint        # Run linters
    python manage.py format      # Format code
    python manage.py check       # Pre-commit hooks on all files
    python manage.py audit       # Dependency vulnerability audit
    python manage.py suite NAME  # Run a verification suite (extra args pass through)
    python manage.py extend FILE # Extend the matching in FILE to a cycle
    python manage.py clean       # Remove cache files
"""

import shlex
import subprocess
import sys


def run_command(cmd, description, cwd=None):
    """Execute a shell command and stop on failure."""
    print(f"\n{'='*60}")
    print(f"Running: {description}")
    print(f"Command: {cmd}")
    if cwd:
        print(f"Working Directory: {cwd}")
    print(f"{'='*60}\n")

    result = subprocess.run(cmd, shell=True, cwd=cwd)
    if result.returncode != 0:
        print(f"\n❌ Error: {description} failed with exit code {result.returncode}")
        sys.exit(result.returncode)
    else:
        print(f"\n✅ {description} completed successfully")


def main():
    if len(sys.argv) < 2:
        print(__doc__)
        sys.exit(1)

    command = sys.argv[1]
    extra = " ".join(shlex.quote(a) for a in sys.argv[2:])

    commands = {
        "test": {"cmd": "pytest -v", "desc": "Test Suite"},
        "test-all": {"cmd": "pytest -v -m \"slow or not slow\"", "desc": "Full Test Suite"},
        "coverage": {"cmd": "pytest --cov=src --cov-report=term-missing", "desc": "Coverage"},
        "lint": {"cmd": "ruff check . && black --check .", "desc": "Code Linting"},
        "format": {"cmd": "black .", "desc": "Code Formatting"},
        "check": {"cmd": "pre-commit run --all-files", "desc": "Pre-commit Hooks"},
        "audit": {"cmd": "pip-audit -r requirements.txt", "desc": "Dependency Audit"},
        "suite": {"cmd": f"python -m src.cli suite {extra}", "desc": "Verification Suite"},
        "extend": {"cmd": f"python -m src.cli extend --in {extra}", "desc": "Cycle Extension"},
        "clean": {
            "cmd": "python -c \"import shutil; import glob; [shutil.rmtree(d) for d in glob.glob('**/__pycache__', recursive=True)]; [shutil.rmtree(d) for d in glob.glob('**/.pytest_cache', recursive=True)]\"",
            "desc": "Clean Cache Files",
        },
    }

    if command not in commands:
        print(f"❌ Unknown command: {command}")
        print(__doc__)
        sys.exit(1)
    if command in ("suite", "extend") and not extra:
        print(f"❌ {command} needs an argument")
        print(__doc__)
        sys.exit(1)

    cmd_info = commands[command]
    run_command(cmd_info["cmd"], cmd_info["desc"], cwd=cmd_info.get("cwd"))


if __name__ == "__main__":
    main()
