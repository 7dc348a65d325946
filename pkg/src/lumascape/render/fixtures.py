"""Virtual fixture arrays on the normalized ring."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from ..errors import InputError


@dataclass(frozen=True)
class Fixture:
    id: str
    position: float


@dataclass(frozen=True)
class FixtureConfig:
    fixtures: tuple[Fixture, ...]

    def __post_init__(self):
        ids = [f.id for f in self.fixtures]
        if len(set(ids)) != len(ids):
            raise InputError("fixture ids must be unique", code="duplicate-fixture-id")
        for f in self.fixtures:
            if not 0.0 <= f.position < 1.0:
                raise InputError(f"fixture {f.id} position {f.position} outside [0, 1)",
                                 code="fixture-position-out-of-range")
        if not self.fixtures:
            raise InputError("fixture config is empty", code="no-fixtures")


def default_venue(n: int = 16) -> FixtureConfig:
    """Evenly spaced ring, ids strip00..strip15."""
    return FixtureConfig(fixtures=tuple(
        Fixture(id=f"strip{i:02d}", position=i / n) for i in range(n)))


def load_fixtures(path: str | Path) -> FixtureConfig:
    path = Path(path)
    if not path.is_file():
        raise InputError(f"fixture config not found: {path}", code="missing-file")
    try:
        node = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise InputError(f"malformed fixture config: {exc}",
                         code="malformed-json") from exc
    try:
        fixtures = tuple(Fixture(id=str(f["id"]), position=float(f["position"]))
                         for f in node["fixtures"])
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"fixture config needs fixtures:[{{id,position}}]: {exc}",
                         code="malformed-fixtures") from exc
    return FixtureConfig(fixtures=fixtures)


def save_fixtures(path: str | Path, config: FixtureConfig) -> None:
    node = {"fixtures": [{"id": f.id, "position": f.position}
                         for f in config.fixtures]}
    Path(path).write_text(json.dumps(node, indent=2) + "\n", encoding="utf-8")
