"""Artifact persistence: atomic files and TinyDB run manifests"""

from storage.files import atomic_write, atomic_write_text, sha256_file
from storage.db import get_db
from storage.manifest import read_runs, record_run

__all__ = [
    "atomic_write",
    "atomic_write_text",
    "sha256_file",
    "get_db",
    "read_runs",
    "record_run",
]
