"""Run manifests: which command produced which files, under which config"""

import os
from datetime import datetime
from typing import Dict, List, Sequence

from tinydb import Query

from storage.db import get_db
from storage.files import sha256_file
from utils.logging import get_logger

logger = get_logger(__name__)


def record_run(out_dir: str, command: str, fingerprint: str, seed: int, files: Sequence[str]) -> dict:
    """
    Record a command run in the output directory's manifest.

    One table per command; a rerun with the same config fingerprint replaces
    the earlier record. Paths are stored relative to out_dir.

    Returns:
        The stored record
    """
    hashes = {
        os.path.relpath(path, out_dir): sha256_file(path)
        for path in sorted(str(p) for p in files)
    }
    record = {
        "command": command,
        "config_fingerprint": fingerprint,
        "seed": seed,
        "files": hashes,
        "timestamp": datetime.now().isoformat(),
    }

    db = get_db(out_dir)
    Run = Query()
    table = db.table(command)
    if table.search(Run.config_fingerprint == fingerprint):
        table.update(record, Run.config_fingerprint == fingerprint)
    else:
        table.insert(record)
    db.close()

    logger.info(f"Manifest: {command} wrote {len(hashes)} file(s) (fingerprint {fingerprint})")
    return record


def read_runs(out_dir: str, command: str) -> List[Dict]:
    """All recorded runs of a command, oldest first"""
    db = get_db(out_dir)
    runs = [dict(doc) for doc in db.table(command).all()]
    db.close()
    return runs
