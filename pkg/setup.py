"""
Setup shim for jump-splice.
Metadata, dependencies and the splice-bench entry point live in pyproject.toml;
this file only keeps `python setup.py develop` and older pip editable installs working.
"""

from setuptools import setup

setup()
