"""Track-set file format.

A track-set file is a JSON document::

    {"scans": 5, "state_dim": 1,
     "tracks": [{"id": "t1", "points": [{"t": 1, "x": [0.0]}, ...]}, ...]}

Points may arrive unsorted and are sorted on load; a duplicate scan index
within one track is a parse error.  Coordinates are serialized with repr
precision (up to 17 significant digits), so a write/read round trip is
bit-exact.
"""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from .core import Track, TrackSet, validate
from .errors import ParseError


def track_set_from_obj(obj: Any) -> TrackSet:
    """Decode and validate a track set from parsed JSON."""
    if not isinstance(obj, dict):
        raise ParseError("top level must be an object")
    try:
        scans = int(obj["scans"])
        state_dim = int(obj["state_dim"])
        raw_tracks = obj["tracks"]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"missing or malformed top-level field: {exc}") from exc
    if not isinstance(raw_tracks, list):
        raise ParseError("tracks must be a list")
    tracks: list[Track] = []
    for pos, raw in enumerate(raw_tracks, start=1):
        if not isinstance(raw, dict):
            raise ParseError(f"track #{pos} must be an object")
        label = str(raw.get("id", f"T{pos}"))
        points: dict[int, tuple[float, ...]] = {}
        for entry in raw.get("points", []):
            try:
                t = int(entry["t"])
                x = tuple(float(v) for v in entry["x"])
            except (KeyError, TypeError, ValueError) as exc:
                raise ParseError(f"track {label}: malformed point: {exc}") from exc
            if t in points:
                raise ParseError(f"track {label}: duplicate scan index {t}")
            points[t] = x
        tracks.append(Track(points, label=label))
    return validate(TrackSet(scans, state_dim, tuple(tracks)))


def track_set_to_obj(track_set: TrackSet) -> dict[str, Any]:
    return {
        "scans": track_set.scans,
        "state_dim": track_set.state_dim,
        "tracks": [
            {
                "id": track_set.track_label(idx),
                "points": [
                    {"t": t, "x": list(x)} for t, x in sorted(trk.points.items())
                ],
            }
            for idx, trk in enumerate(track_set.tracks, start=1)
        ],
    }


def load_track_set(path: str | Path) -> TrackSet:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path} is not valid JSON: {exc}") from exc
    return track_set_from_obj(obj)


def save_track_set(track_set: TrackSet, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(track_set_to_obj(track_set), fh, indent=2)
        fh.write("\n")
