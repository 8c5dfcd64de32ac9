"""Shared TinyDB handle for run manifests"""

import os
from tinydb import TinyDB

MANIFEST_FILE = "manifest.json"


def get_db(out_dir: str) -> TinyDB:
    """Get the manifest database of an output directory"""
    os.makedirs(out_dir, exist_ok=True)
    return TinyDB(os.path.join(out_dir, MANIFEST_FILE), sort_keys=True, indent=2)
