"""Cross-session opponent memory, one JSON file per opponent id."""

from __future__ import annotations

import hashlib
import json
import os
import re
import tempfile
import threading
from dataclasses import asdict, dataclass
from pathlib import Path

from .opponent_model import OpponentStats

_FIELDS = ("opponent_id", "ubi", "aui", "sessions_observed")
_UNSAFE = re.compile(r"[^A-Za-z0-9._-]")


class PersistenceError(OSError):
    pass


class CorruptRecordError(PersistenceError):
    pass


@dataclass(frozen=True)
class StatsRecord:
    opponent_id: str
    ubi: int
    aui: int
    sessions_observed: int

    def __post_init__(self) -> None:
        if not isinstance(self.opponent_id, str) or not self.opponent_id:
            raise ValueError("opponent_id must be a non-empty string")
        for name in _FIELDS[1:]:
            value = getattr(self, name)
            if type(value) is not int or value < 0:
                raise ValueError(f"{name} must be a non-negative int, got {value!r}")

    @property
    def stats(self) -> OpponentStats:
        return OpponentStats(self.ubi, self.aui, self.sessions_observed)

    @classmethod
    def from_stats(cls, opponent_id: str, stats: OpponentStats) -> StatsRecord:
        return cls(opponent_id, stats.ubi, stats.aui, stats.sessions_observed)


def sanitize_id(opponent_id: str) -> str:
    safe = _UNSAFE.sub("_", opponent_id)
    if safe != opponent_id or safe.startswith("."):
        # keep distinct ids distinct after substitution
        digest = hashlib.sha1(opponent_id.encode("utf-8")).hexdigest()[:8]
        safe = f"{safe.lstrip('.')}-{digest}"
    return safe


class StatsStore:
    """Directory of ``<sanitized_id>.json`` records.

    Writes go to a temp file in the same directory and are moved into place
    with :func:`os.replace`, so readers see either the old or the new record.
    """

    def __init__(self, directory: str | Path):
        self.directory = Path(directory)
        self._lock = threading.Lock()

    def path_for(self, opponent_id: str) -> Path:
        return self.directory / f"{sanitize_id(opponent_id)}.json"

    def save(self, record: StatsRecord) -> Path:
        path = self.path_for(record.opponent_id)
        payload = json.dumps(asdict(record), sort_keys=True)
        with self._lock:
            try:
                self.directory.mkdir(parents=True, exist_ok=True)
                fd, tmp = tempfile.mkstemp(dir=self.directory, prefix=".tmp-", suffix=".json")
                try:
                    with os.fdopen(fd, "w", encoding="utf-8") as fh:
                        fh.write(payload)
                        fh.flush()
                        os.fsync(fh.fileno())
                    os.replace(tmp, path)
                except BaseException:
                    Path(tmp).unlink(missing_ok=True)
                    raise
            except OSError as exc:
                raise PersistenceError(f"could not save stats for {record.opponent_id!r}: {exc}") from exc
        return path

    def load(self, opponent_id: str) -> StatsRecord | None:
        path = self.path_for(opponent_id)
        try:
            text = path.read_text(encoding="utf-8")
        except FileNotFoundError:
            return None
        except OSError as exc:
            raise PersistenceError(f"could not read {path}: {exc}") from exc
        record = _parse(text, path)
        if record.opponent_id != opponent_id:
            raise CorruptRecordError(f"{path} holds stats for {record.opponent_id!r}")
        return record

    def records(self) -> list[StatsRecord]:
        if not self.directory.is_dir():
            return []
        return [
            _parse(p.read_text(encoding="utf-8"), p)
            for p in sorted(self.directory.glob("*.json"))
            if not p.name.startswith(".")
        ]

    def reset_all(self) -> None:
        with self._lock:
            if not self.directory.is_dir():
                return
            try:
                for p in self.directory.glob("*.json"):
                    p.unlink()
            except OSError as exc:
                raise PersistenceError(f"could not reset {self.directory}: {exc}") from exc


def _parse(text: str, path: Path) -> StatsRecord:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CorruptRecordError(f"{path}: {exc}") from exc
    if not isinstance(doc, dict) or set(doc) != set(_FIELDS):
        raise CorruptRecordError(f"{path}: unexpected fields")
    try:
        return StatsRecord(**doc)
    except (TypeError, ValueError) as exc:
        raise CorruptRecordError(f"{path}: {exc}") from exc
