"""Declarative scenario files.

A scenario is a JSON object::

    {
      "name": "a2_root_z3",
      "cartan_type": "A2",
      "lattice": "root",                      # or "weight", or generator list
      "galois_generators": [[[0, -1], [1, -1]]],
      "m_min": 1,
      "m_max": 20
    }

Custom lattice generators are written in fundamental-weight coordinates.
Matrices are row-major and act on column vectors.

Structural problems (bad JSON, missing keys, wrong types) raise
:class:`ScenarioParseError`; mathematically invalid content raises a
:class:`~weyl_equidist.errors.ValidationError` when the datum or action is
built.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Any

from .errors import ValidationError, WeylEquidistError
from .galois import GaloisAction
from .rootdatum import RootDatum, build_root_datum


class ScenarioParseError(WeylEquidistError):
    pass


@dataclass(frozen=True)
class Scenario:
    name: str
    cartan_type: str
    lattice: str | tuple[tuple[int, ...], ...] = "root"
    galois_generators: tuple[tuple[tuple[int, ...], ...], ...] = ()
    m_min: int = 1
    m_max: int = 1
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        if self.m_min < 0 or self.m_max < self.m_min:
            raise ValidationError(f"need 0 <= m_min <= m_max, got {self.m_min}..{self.m_max}")

    def datum(self) -> RootDatum:
        if "datum" not in self._cache:
            self._cache["datum"] = build_root_datum(self.cartan_type, self.lattice)
        return self._cache["datum"]

    def action(self) -> GaloisAction:
        if "action" not in self._cache:
            self._cache["action"] = GaloisAction.from_lists(self.datum(), self.galois_generators)
        return self._cache["action"]

    @property
    def m_range(self) -> range:
        return range(self.m_min, self.m_max + 1)

    def to_dict(self) -> dict[str, Any]:
        lattice = self.lattice if isinstance(self.lattice, str) else [list(g) for g in self.lattice]
        return {
            "name": self.name,
            "cartan_type": self.cartan_type,
            "lattice": lattice,
            "galois_generators": [[list(r) for r in g] for g in self.galois_generators],
            "m_min": self.m_min,
            "m_max": self.m_max,
        }


def _int(v: Any, what: str) -> int:
    if isinstance(v, bool) or not isinstance(v, int):
        raise ScenarioParseError(f"{what} must be an integer, got {v!r}")
    return v


def parse_galois(raw: Any) -> tuple[tuple[tuple[int, ...], ...], ...]:
    if not isinstance(raw, list):
        raise ScenarioParseError("galois_generators must be a list of matrices")
    out = []
    for g in raw:
        if not isinstance(g, list) or not all(isinstance(r, list) for r in g):
            raise ScenarioParseError(f"generator {g!r} is not a row-major integer matrix")
        out.append(tuple(tuple(_int(x, "matrix entry") for x in r) for r in g))
    return tuple(out)


def scenario_from_dict(data: Any) -> Scenario:
    if not isinstance(data, dict):
        raise ScenarioParseError("scenario must be a JSON object")
    try:
        ctype = data["cartan_type"]
    except KeyError:
        raise ScenarioParseError("scenario is missing 'cartan_type'") from None
    if not isinstance(ctype, str):
        raise ScenarioParseError("cartan_type must be a string")
    lattice = data.get("lattice", "root")
    if isinstance(lattice, list):
        if not all(isinstance(g, list) for g in lattice):
            raise ScenarioParseError("custom lattice must be a list of integer vectors")
        lattice = tuple(tuple(_int(x, "lattice entry") for x in g) for g in lattice)
    elif lattice not in ("root", "weight"):
        raise ScenarioParseError(f"lattice must be 'root', 'weight' or a generator list, got {lattice!r}")
    m_min = _int(data.get("m_min", 1), "m_min")
    m_max = _int(data.get("m_max", m_min), "m_max")
    name = data.get("name", ctype)
    if not isinstance(name, str):
        raise ScenarioParseError("name must be a string")
    return Scenario(name, ctype, lattice, parse_galois(data.get("galois_generators", [])), m_min, m_max)


def load_scenario(spec: str) -> Scenario:
    """Load from a path, or ``builtin:<name>`` for a shipped scenario."""
    if spec.startswith("builtin:"):
        name = spec.split(":", 1)[1]
        try:
            text = resources.files(__package__).joinpath("scenarios").joinpath(f"{name}.json").read_text()
        except FileNotFoundError:
            raise ScenarioParseError(f"no builtin scenario {name!r}; have {builtin_names()}") from None
    else:
        text = Path(spec).read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"invalid JSON in {spec}: {exc}") from None
    return scenario_from_dict(data)


def builtin_names() -> list[str]:
    root = resources.files(__package__).joinpath("scenarios")
    return sorted(p.name[:-5] for p in root.iterdir() if p.name.endswith(".json"))


def builtin_scenarios() -> list[Scenario]:
    return [load_scenario(f"builtin:{n}") for n in builtin_names()]
