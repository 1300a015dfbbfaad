"""Digest-keyed persistence for enumerated fibers.

A cache file stores canonical representatives and orbit sizes per fiber
descriptor.  Entries are only reused when both the group-table digest and
the move-orientation tag match; anything else recomputes.
"""

from __future__ import annotations

import json
import os
from pathlib import Path

from .braid import FiberSpec, OrbitClass, evaluate, generated_subgroup, nielsen
from .groups import FiniteGroup

# Orientation tag: sigma sends (a, b) to (b, b^-1 a b).  A tool using the
# opposite convention has the same orbits but different canonical members,
# so its caches must never be mixed with ours.
SIGMA_CONVENTION = "sigma-right-conjugate-v1"
CACHE_ENV_VAR = "HURWITZ_CACHE_DIR"


class OrbitCache:
    def __init__(self, path: Path):
        self.path = Path(path)
        self._data: dict | None = None
        self._dirty = False

    def _load(self, G: FiniteGroup) -> dict:
        if self._data is None:
            data = None
            if self.path.exists():
                try:
                    with open(self.path, "r", encoding="utf-8") as fh:
                        data = json.load(fh)
                except (json.JSONDecodeError, OSError):
                    data = None
            if (
                not isinstance(data, dict)
                or data.get("group_digest") != G.digest
                or data.get("sigma") != SIGMA_CONVENTION
            ):
                data = {
                    "version": 1,
                    "group_digest": G.digest,
                    "group_label": G.label,
                    "sigma": SIGMA_CONVENTION,
                    "fibers": {},
                }
            self._data = data
        return self._data

    def get(self, G: FiniteGroup, spec: FiberSpec) -> list[OrbitClass] | None:
        entry = self._load(G)["fibers"].get(spec.key())
        if entry is None:
            return None
        out = []
        for rep, size in zip(entry["reps"], entry["sizes"]):
            v = tuple(rep)
            out.append(OrbitClass(
                canonical=v,
                size=int(size),
                ev=evaluate(G, v),
                nu=nielsen(G, v),
                subgroup=generated_subgroup(G, v),
            ))
        return out

    def put(self, G: FiniteGroup, spec: FiberSpec, classes: list[OrbitClass]) -> None:
        data = self._load(G)
        data["fibers"][spec.key()] = {
            "reps": [list(c.canonical) for c in classes],
            "sizes": [c.size for c in classes],
        }
        self._dirty = True

    def save(self) -> None:
        if not self._dirty or self._data is None:
            return
        self.path.parent.mkdir(parents=True, exist_ok=True)
        tmp = self.path.with_suffix(self.path.suffix + ".tmp")
        with open(tmp, "w", encoding="utf-8") as fh:
            json.dump(self._data, fh, sort_keys=True, separators=(",", ":"))
        os.replace(tmp, self.path)
        self._dirty = False


def resolve_cache(explicit: str | None, G: FiniteGroup) -> OrbitCache | None:
    """--cache wins; else the cache-dir env var supplies a per-group file."""
    if explicit:
        return OrbitCache(Path(explicit))
    env = os.environ.get(CACHE_ENV_VAR)
    if env:
        return OrbitCache(Path(env) / f"{G.digest[:16]}.json")
    return None
