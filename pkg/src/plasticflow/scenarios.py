"""Scenario files: JSON descriptions of a (family, params, functions)
triple plus per-action blocks.  Schema version 1; unknown keys are
rejected everywhere."""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .die import DieScenario
from .errors import ScenarioError
from .flow import FeedSpec
from .pde import FieldMap
from .solutions import make_solution

_TOP_KEYS = {"schema_version", "family", "params", "functions",
             "verify", "sample", "flowline", "boundary", "die"}
_VERIFY_KEYS = {"region", "samples", "seed", "tol_analytic", "tol_fd", "tol_compat"}
_FLOW_KEYS = {"seeds", "dt", "steps", "direction"}
_BOUNDARY_KEYS = {"feed", "seeds", "dt", "steps"}
_DIE_KEYS = {"region", "wall_seeds", "inlet", "outlet", "raster", "dt", "steps"}
_FEED_KEYS = {"U0", "V0", "seeds"}


def _require_keys(block: dict, allowed: set[str], where: str) -> None:
    unknown = set(block) - allowed
    if unknown:
        raise ScenarioError(f"unknown keys {sorted(unknown)} in {where}")


def _region(value, where: str) -> tuple[float, float, float, float]:
    if (not isinstance(value, (list, tuple)) or len(value) != 4
            or not all(isinstance(v, (int, float)) for v in value)):
        raise ScenarioError(f"{where} must be [x0, x1, y0, y1]")
    return tuple(float(v) for v in value)


def _seeds(value, where: str) -> list[tuple[float, float]]:
    if not isinstance(value, list):
        raise ScenarioError(f"{where} must be a list of [x, y] pairs")
    out = []
    for item in value:
        if (not isinstance(item, (list, tuple)) or len(item) != 2
                or not all(isinstance(v, (int, float)) for v in item)):
            raise ScenarioError(f"{where} must be a list of [x, y] pairs")
        out.append((float(item[0]), float(item[1])))
    return out


@dataclass
class Scenario:
    family: str
    params: dict
    functions: dict[str, str]
    verify: dict = field(default_factory=dict)
    sample: dict = field(default_factory=dict)
    flowline: dict = field(default_factory=dict)
    boundary: dict = field(default_factory=dict)
    die: dict = field(default_factory=dict)
    path: str = ""

    def build_field(self) -> FieldMap:
        return make_solution(self.family, self.params, self.functions)

    def die_scenario(self, F: FieldMap | None = None,
                     dt: float | None = None, steps: int | None = None) -> DieScenario:
        if not self.die:
            raise ScenarioError("scenario has no 'die' block")
        blk = self.die

        def feed_entries(side: str):
            if side not in blk:
                return []
            raw = blk[side]
            items = raw if isinstance(raw, list) else [raw]
            entries = []
            for item in items:
                if not isinstance(item, dict):
                    raise ScenarioError(f"die.{side} entries must be objects")
                _require_keys(item, _FEED_KEYS, f"die.{side}")
                entries.append((FeedSpec(float(item["U0"]), float(item["V0"])),
                                _seeds(item.get("seeds", []), f"die.{side}.seeds")))
            return entries

        raster = blk.get("raster", [80, 80])
        return DieScenario(
            field=F if F is not None else self.build_field(),
            region=_region(blk["region"], "die.region"),
            wall_seeds=_seeds(blk.get("wall_seeds", []), "die.wall_seeds"),
            inlet=feed_entries("inlet"),
            outlet=feed_entries("outlet"),
            raster=(int(raster[0]), int(raster[1])),
            dt=float(dt if dt is not None else blk.get("dt", 1e-3)),
            n_max=int(steps if steps is not None else blk.get("steps", 4000)),
        )


def load_scenario(path: str) -> Scenario:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"scenario {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ScenarioError("scenario top level must be a JSON object")
    _require_keys(data, _TOP_KEYS, "scenario")
    if data.get("schema_version") != 1:
        raise ScenarioError("schema_version must be 1")
    family = data.get("family")
    if not isinstance(family, str):
        raise ScenarioError("scenario needs a string 'family'")
    params = data.get("params", {})
    if not isinstance(params, dict):
        raise ScenarioError("'params' must be an object")
    functions = data.get("functions", {})
    if not isinstance(functions, dict) or not all(
            isinstance(v, str) for v in functions.values()):
        raise ScenarioError("'functions' must map slot names to expression strings")
    for name, allowed in (("verify", _VERIFY_KEYS), ("flowline", _FLOW_KEYS),
                          ("boundary", _BOUNDARY_KEYS), ("die", _DIE_KEYS)):
        if name in data:
            if not isinstance(data[name], dict):
                raise ScenarioError(f"'{name}' must be an object")
            _require_keys(data[name], allowed, name)
    if "die" in data:
        for side in ("inlet", "outlet"):
            if side in data["die"]:
                raw = data["die"][side]
                for item in (raw if isinstance(raw, list) else [raw]):
                    if not isinstance(item, dict):
                        raise ScenarioError(f"die.{side} entries must be objects")
                    _require_keys(item, _FEED_KEYS, f"die.{side}")
    if "sample" in data and not isinstance(data["sample"], dict):
        raise ScenarioError("'sample' must be an object")
    return Scenario(
        family=family,
        params=dict(params),
        functions={str(k): str(v) for k, v in functions.items()},
        verify=dict(data.get("verify", {})),
        sample=dict(data.get("sample", {})),
        flowline=dict(data.get("flowline", {})),
        boundary=dict(data.get("boundary", {})),
        die=dict(data.get("die", {})),
        path=path,
    )
