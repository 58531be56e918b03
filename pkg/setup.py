"""Fallback setuptools entry point; all metadata is read from pyproject.toml."""

from pathlib import Path

import toml
from setuptools import find_packages, setup

HERE = Path(__file__).parent


def load_pyproject_metadata() -> dict:
    project = toml.loads((HERE / "pyproject.toml").read_text()).get("project", {})
    authors = project.get("authors", [])
    return {
        "name": project["name"],
        "version": project["version"],
        "description": project.get("description", ""),
        "author": ", ".join(a.get("name", "") for a in authors),
        "author_email": ", ".join(a.get("email", "") for a in authors),
        "keywords": project.get("keywords", []),
        "classifiers": project.get("classifiers", []),
        "python_requires": project.get("requires-python"),
        "install_requires": project.get("dependencies", []),
        "extras_require": project.get("optional-dependencies", {}),
        "entry_points": {
            "console_scripts": [f"{k}={v}" for k, v in project.get("scripts", {}).items()]
        },
    }


setup(
    packages=find_packages(include=["ssguard", "ssguard.*"]),
    package_data={"ssguard": ["assets/*.yml"]},
    long_description=(HERE / "README.md").read_text(),
    long_description_content_type="text/markdown",
    **load_pyproject_metadata(),
)
