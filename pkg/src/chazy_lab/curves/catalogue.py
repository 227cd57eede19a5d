"""Loading the shipped catalogue of solution families."""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from importlib import resources
from typing import Any

import yaml

from ..schwarz import Recipe, TriangleAngles
from . import expr

KINDS = (
    "rational-in-s",
    "radical-in-s",
    "radical-with-r",
    "trigonometric",
    "hypergeometric",
    "implicit-polynomial",
)


class CatalogueError(ValueError):
    pass


class UnknownFamily(KeyError):
    pass


@dataclass(frozen=True)
class Sampling:
    center: complex = 0.3
    radii: tuple[float, float] = (0.05, 0.15)
    interval: tuple[float, float] | None = None
    clearance: float = 0.03

    @classmethod
    def from_record(cls, rec: dict | None) -> "Sampling":
        rec = dict(rec or {})
        if "interval" in rec:
            lo, hi = (float(v) for v in rec["interval"])
            if not lo < hi:
                raise CatalogueError(f"empty interval {rec['interval']}")
            return cls(center=complex((lo + hi) / 2), interval=(lo, hi),
                       clearance=float(rec.get("clearance", 0.03)))
        r_in, r_out = (float(v) for v in rec.get("radii", (0.05, 0.15)))
        if not 0 <= r_in < r_out:
            raise CatalogueError(f"bad annulus radii {rec.get('radii')}")
        return cls(center=complex(rec.get("center", 0.3)), radii=(r_in, r_out),
                   clearance=float(rec.get("clearance", 0.03)))


@dataclass(frozen=True)
class RootContinuation:
    """Inverse given as a root of a polynomial whose coefficients depend on ``var``."""

    unknown: str
    poly: tuple[str, ...]
    then: str


@dataclass(frozen=True)
class CurveFamily:
    id: str
    k: Fraction
    kind: str
    param: str
    var: str
    x: str
    sampling: Sampling
    anchor: complex
    table: int | None = None
    row: int | None = None
    angles: TriangleAngles | None = None
    recipe: Recipe | None = None
    s: str | None = None
    y: str | None = None
    y_param: str | None = None
    F: str | None = None
    H: str | None = None
    s_of_x: str | RootContinuation | None = None
    s_relation: str | None = None
    s_relation_subs: dict[str, str] = field(default_factory=dict)
    constants: dict[str, str] = field(default_factory=dict)
    singularities: tuple[complex, ...] = ()

    def constant_values(self) -> dict[str, Any]:
        return {name: expr.evaluate(text, {}) for name, text in self.constants.items()}

    def expressions(self) -> dict[str, str]:
        out = {}
        for name in ("s", "x", "y", "y_param", "F", "H", "s_relation"):
            v = getattr(self, name)
            if v is not None:
                out[name] = v
        if isinstance(self.s_of_x, str):
            out["s_of_x"] = self.s_of_x
        return out

    @property
    def label(self) -> str:
        if self.table is None:
            return self.id
        return f"{self.id} (table {self.table}, row {self.row})"


def _family(rec: dict) -> CurveFamily:
    try:
        fid = str(rec["id"])
        kind = rec["kind"]
    except KeyError as exc:
        raise CatalogueError(f"record missing {exc}") from None
    if kind not in KINDS:
        raise CatalogueError(f"{fid}: unknown kind {kind!r}")
    s_of_x = rec.get("s_of_x")
    if isinstance(s_of_x, dict):
        s_of_x = RootContinuation(s_of_x["unknown"], tuple(s_of_x["poly"]), s_of_x["then"])
    fam = CurveFamily(
        id=fid,
        k=Fraction(str(rec["k"])),
        kind=kind,
        param=rec["param"],
        var=rec["var"],
        x=rec["x"],
        sampling=Sampling.from_record(rec.get("sample")),
        anchor=complex(rec.get("anchor", 0.3)),
        table=rec.get("table"),
        row=rec.get("row"),
        angles=TriangleAngles.parse(rec["angles"]) if "angles" in rec else None,
        recipe=Recipe(*rec["recipe"]) if "recipe" in rec else None,
        s=rec.get("s"),
        y=rec.get("y"),
        y_param=rec.get("y_param"),
        F=rec.get("F"),
        H=rec.get("H"),
        s_of_x=s_of_x,
        s_relation=rec.get("s_relation"),
        s_relation_subs=dict(rec.get("s_relation_subs", {})),
        constants=dict(rec.get("constants", {})),
        singularities=tuple(complex(v) for v in rec.get("singularities", ())),
    )
    for text in fam.expressions().values():
        expr.parse(text)
    if (fam.s is None) != (fam.angles is None):
        raise CatalogueError(f"{fid}: a Schwarz function needs its angles and vice versa")
    return fam


def parse_catalogue(text: str) -> tuple[CurveFamily, ...]:
    data = yaml.safe_load(text)
    if not isinstance(data, dict) or data.get("schema") != 1:
        raise CatalogueError("expected a schema-1 catalogue")
    fams = tuple(_family(r) for r in data["families"])
    ids = [f.id for f in fams]
    if len(set(ids)) != len(ids):
        raise CatalogueError("duplicate family ids")
    return fams


@lru_cache(maxsize=1)
def load() -> tuple[CurveFamily, ...]:
    text = resources.files(__package__).joinpath("catalogue.yaml").read_text()
    return parse_catalogue(text)


def get(fid: str) -> CurveFamily:
    for f in load():
        if f.id == fid:
            return f
    raise UnknownFamily(fid)


def table_families(table: int | None = None) -> list[CurveFamily]:
    return [f for f in load() if f.table is not None and (table is None or f.table == table)]


def table_rows(table: int) -> set[int]:
    return {f.row for f in table_families(table)}
