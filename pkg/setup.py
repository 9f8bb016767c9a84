"""
Setup Script - Initializes project structure and reference fixtures.
Run this once when first setting up the project.
"""

import json
import os
import sys

SCRIPT_DIR = os.path.dirname(os.path.abspath(__file__))


def fixture_files() -> dict:
    from datasets.seir import PARAMETERS, SEIR_RANGES
    from harness.results import RESULT_COLUMNS, RESULT_DTYPES

    seir_ranges = {
        "parameters": list(PARAMETERS),
        "regions": {region: {name: list(bounds) for name, bounds in ranges.items()}
                    for region, ranges in SEIR_RANGES.items()},
    }
    schema = {"columns": [{"name": name, "dtype": RESULT_DTYPES[name]} for name in RESULT_COLUMNS]}
    return {
        "tests/fixtures/seir_ranges.json": json.dumps(seir_ranges, indent=2) + "\n",
        "tests/fixtures/results_schema.json": json.dumps(schema, indent=2) + "\n",
    }


def create_structure():
    paths = [
        "data/system_logs",
        "results",
        "models",
        "tests/fixtures",
    ]

    print("Initializing Project Structure...")

    for p in paths:
        os.makedirs(os.path.join(SCRIPT_DIR, p), exist_ok=True)
        print(f"Created dir: {p}")

    for f, content in fixture_files().items():
        path = os.path.join(SCRIPT_DIR, f)
        if not os.path.exists(path):
            with open(path, "w", encoding="utf-8") as file:
                file.write(content)
            print(f"Created file: {f}")
        else:
            print(f"Exists (skipped): {f}")

    print("\nDone. Run `python main.py --help` to get started.")


def package_setup():
    from setuptools import setup

    setup(
        name="trim-forests",
        version="0.1.0",
        python_requires=">=3.9",
        packages=["datasets", "egop", "evaluation", "harness", "mondrian", "trim"],
        py_modules=["errors", "logger_config", "main", "trim_config"],
        install_requires=[
            "numpy>=1.23.0",
            "scipy>=1.9.0",
            "pandas>=1.5.0",
            "scikit-learn>=1.1.0",
            "joblib>=1.2.0",
        ],
    )


if __name__ == "__main__":
    if len(sys.argv) > 1:
        package_setup()
    else:
        create_structure()
