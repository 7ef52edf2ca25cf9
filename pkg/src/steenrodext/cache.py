"""On-disk resolution cache.

One JSON file per (spec hash, bounds); the key also folds in the algebra
basis fingerprint and the payload format version, so stale or foreign
files simply miss and the resolution is rebuilt.  Writes go through a
temporary file and an atomic rename.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile
from pathlib import Path
from typing import Optional

from steenrodext.modules import GradedModule
from steenrodext.resolution import RESOLUTION_FORMAT, Resolution, minimal_resolution

CACHE_ENV_VAR = "STEENRODEXT_CACHE_DIR"


def cache_key(spec_text: str, s_max: int, t_max: int, algebra_fingerprint: str) -> str:
    payload = json.dumps(
        {
            "format": RESOLUTION_FORMAT,
            "spec": spec_text,
            "s_max": s_max,
            "t_max": t_max,
            "algebra": algebra_fingerprint,
        },
        sort_keys=True,
        separators=(",", ":"),
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def cache_path(cache_dir: Path, key: str) -> Path:
    return cache_dir / f"resolution-{key}.json"


def load_resolution(path: Path, module: GradedModule) -> Optional[Resolution]:
    """Load a cached resolution; None on any mismatch (forces rebuild)."""
    try:
        payload = json.loads(path.read_text())
    except (OSError, ValueError):
        return None
    if payload.get("format") != RESOLUTION_FORMAT:
        return None
    try:
        return Resolution.from_payload(module, payload)
    except (KeyError, ValueError):
        return None


def save_resolution(path: Path, res: Resolution) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(json.dumps(res.to_payload(), sort_keys=True, separators=(",", ":")))
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except OSError:
            pass
        raise


def cached_resolution(
    module: GradedModule,
    spec_text: str,
    s_max: int,
    t_max: int,
    cache_dir: Optional[Path],
    paranoid: bool = False,
) -> Resolution:
    """Build or load a minimal resolution through the cache.

    With ``paranoid`` set, cache hits are re-verified for minimality and
    exactness before use; failures fall back to a rebuild.
    """
    if cache_dir is None:
        return minimal_resolution(module, s_max, t_max)
    fingerprint = module.algebra.table_fingerprint(t_max)
    key = cache_key(spec_text, s_max, t_max, fingerprint)
    path = cache_path(cache_dir, key)
    res = load_resolution(path, module)
    if res is not None and paranoid:
        ok_min, _ = res.verify_minimal()
        ok_ex, _ = res.verify_exact()
        if not (ok_min and ok_ex):
            res = None
    if res is None:
        res = minimal_resolution(module, s_max, t_max)
        save_resolution(path, res)
    return res
