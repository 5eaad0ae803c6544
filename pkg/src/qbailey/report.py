"""Verification reports and their JSON form."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field

SCHEMA = 1

MATCH = "match"
MISMATCH = "mismatch"
ERROR = "error"


@dataclass(frozen=True)
class Mismatch:
    expo_num: int
    denom: int
    lhs_coeff: int
    rhs_coeff: int
    index: tuple[int, ...] | None = None

    def to_json(self) -> dict:
        out = {
            "expo_num": self.expo_num,
            "denom": self.denom,
            "lhs_coeff": str(self.lhs_coeff),
            "rhs_coeff": str(self.rhs_coeff),
        }
        if self.index is not None:
            out["index"] = list(self.index)
        return out

    @classmethod
    def from_json(cls, d: dict) -> Mismatch:
        index = d.get("index")
        return cls(d["expo_num"], d["denom"], int(d["lhs_coeff"]), int(d["rhs_coeff"]),
                   None if index is None else tuple(index))


@dataclass(frozen=True)
class VerifyReport:
    id: str
    order: int
    status: str
    first_mismatch: Mismatch | None = None
    wall_ms: float = 0.0
    term_count: int = 0
    message: str = ""
    annotations: tuple[str, ...] = field(default=())

    def __post_init__(self):
        if self.status not in (MATCH, MISMATCH, ERROR):
            raise ValueError(f"unknown status {self.status!r}")
        if self.status == MATCH and self.first_mismatch is not None:
            raise ValueError("a matching report cannot carry a mismatch")

    @property
    def ok(self) -> bool:
        return self.status == MATCH

    def to_json(self) -> dict:
        d = asdict(self)
        d["first_mismatch"] = None if self.first_mismatch is None else self.first_mismatch.to_json()
        d["annotations"] = list(self.annotations)
        return d

    @classmethod
    def from_json(cls, d: dict) -> VerifyReport:
        fm = d.get("first_mismatch")
        return cls(
            id=d["id"],
            order=d["order"],
            status=d["status"],
            first_mismatch=None if fm is None else Mismatch.from_json(fm),
            wall_ms=d.get("wall_ms", 0.0),
            term_count=d.get("term_count", 0),
            message=d.get("message", ""),
            annotations=tuple(d.get("annotations", ())),
        )

    def to_text(self) -> str:
        line = f"{self.id:<14} order={self.order:<4} {self.status.upper():<8} " \
               f"{self.wall_ms:9.1f} ms  terms={self.term_count}"
        if self.first_mismatch is not None:
            fm = self.first_mismatch
            where = f" at index {fm.index}" if fm.index is not None else ""
            power = f"q^{fm.expo_num}" if fm.denom == 1 else f"q^({fm.expo_num}/{fm.denom})"
            line += (f"\n    first mismatch{where}: {power} "
                     f"lhs={fm.lhs_coeff} rhs={fm.rhs_coeff}")
        if self.message:
            line += f"\n    {self.message}"
        for note in self.annotations:
            line += f"\n    note: {note}"
        return line


def dumps(reports: list[VerifyReport]) -> str:
    return json.dumps({"schema": SCHEMA, "reports": [r.to_json() for r in reports]}, indent=2)


def loads(text: str) -> list[VerifyReport]:
    data = json.loads(text)
    if data.get("schema") != SCHEMA:
        raise ValueError(f"unsupported report schema {data.get('schema')!r}")
    return [VerifyReport.from_json(d) for d in data["reports"]]
