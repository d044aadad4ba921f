"""Data models shared across the algebra engines."""

from __future__ import annotations

from dataclasses import dataclass, asdict, field
from typing import Any, Dict, List, Optional, Tuple

REAL = "real"
ISOTROPIC = "isotropic"
IMAGINARY = "imaginary"

Beta = Tuple[int, ...]


def _beta_key(beta: Beta) -> str:
    return ",".join(str(k) for k in beta)


def _parse_beta(text: str) -> Beta:
    return tuple(int(part) for part in text.split(","))


@dataclass
class CartanDatum:
    """Borcherds-Cartan datum as read from a datum file."""

    nodes: List[str]
    a: List[List[int]]
    s: List[int]
    tau: Dict[str, str] = field(default_factory=dict)
    name: str = ""

    @property
    def rank(self) -> int:
        return len(self.nodes)

    def kind(self, i: int) -> str:
        if self.a[i][i] == 2:
            return REAL
        if self.a[i][i] == 0:
            return ISOTROPIC
        return IMAGINARY

    def is_real(self, i: int) -> bool:
        return self.kind(i) == REAL

    def real_nodes(self) -> List[int]:
        return [i for i in range(self.rank) if self.is_real(i)]

    def imaginary_nodes(self) -> List[int]:
        return [i for i in range(self.rank) if not self.is_real(i)]

    def node_index(self, label: str) -> int:
        label = str(label).strip()
        if label in self.nodes:
            return self.nodes.index(label)
        raise KeyError(f"Unknown node {label!r}; nodes are {', '.join(self.nodes)}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "CartanDatum":
        a = [[int(entry) for entry in row] for row in payload["a"]]
        nodes = payload.get("nodes") or [str(k + 1) for k in range(len(a))]
        return cls(
            nodes=[str(node) for node in nodes],
            a=a,
            s=[int(value) for value in payload.get("s", [1] * len(a))],
            tau={str(key): str(value) for key, value in (payload.get("tau") or {}).items()},
            name=str(payload.get("name", "")),
        )


@dataclass(frozen=True)
class Weight:
    """A weight through its pairings with the coroots h_i and d_i."""

    h_values: Tuple[int, ...]
    d_values: Tuple[int, ...]

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(
            tuple(x + y for x, y in zip(self.h_values, other.h_values)),
            tuple(x + y for x, y in zip(self.d_values, other.d_values)),
        )

    def __sub__(self, other: "Weight") -> "Weight":
        return self + other.scaled(-1)

    def scaled(self, factor: int) -> "Weight":
        return Weight(tuple(factor * x for x in self.h_values), tuple(factor * x for x in self.d_values))

    def to_dict(self) -> Dict[str, Any]:
        return {"h": list(self.h_values), "d": list(self.d_values)}

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "Weight":
        return cls(tuple(int(x) for x in payload["h"]), tuple(int(x) for x in payload.get("d", [])))


@dataclass(frozen=True)
class RootLatticeVector:
    coefficients: Tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coefficients)

    def is_positive(self) -> bool:
        return all(k >= 0 for k in self.coefficients)

    def support(self) -> List[int]:
        return [i for i, k in enumerate(self.coefficients) if k != 0]

    def __add__(self, other: "RootLatticeVector") -> "RootLatticeVector":
        return RootLatticeVector(tuple(x + y for x, y in zip(self.coefficients, other.coefficients)))

    def __sub__(self, other: "RootLatticeVector") -> "RootLatticeVector":
        return RootLatticeVector(tuple(x - y for x, y in zip(self.coefficients, other.coefficients)))


@dataclass(frozen=True)
class WeylElement:
    """Element of the Weyl group, stored as a reduced word in real nodes (applied right to left)."""

    word: Tuple[int, ...]

    @property
    def length(self) -> int:
        return len(self.word)

    @property
    def sign(self) -> int:
        return -1 if self.length % 2 else 1


@dataclass(frozen=True)
class ImaginaryCorrection:
    s: RootLatticeVector
    sign: int


@dataclass
class Character:
    """Truncated character: multiplicity of the weight lambda - beta for every beta of height <= cutoff."""

    highest: Weight
    cutoff: int
    multiplicities: Dict[Beta, int] = field(default_factory=dict)

    def coefficient(self, beta: Beta) -> int:
        return self.multiplicities.get(tuple(beta), 0)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "highest": self.highest.to_dict(),
            "cutoff": self.cutoff,
            "multiplicities": [
                {"beta": list(beta), "mult": mult}
                for beta, mult in sorted(self.multiplicities.items(), key=lambda item: (sum(item[0]), item[0]))
            ],
        }


@dataclass
class RootMultiplicityTable:
    cutoff: int
    mult: Dict[Beta, int] = field(default_factory=dict)

    def positive_roots(self) -> List[Beta]:
        return sorted((beta for beta, m in self.mult.items() if m > 0), key=lambda beta: (sum(beta), beta))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cutoff": self.cutoff,
            "mult": {_beta_key(beta): m for beta, m in sorted(self.mult.items(), key=lambda x: (sum(x[0]), x[0]))},
        }

    @classmethod
    def from_dict(cls, payload: Dict[str, Any]) -> "RootMultiplicityTable":
        return cls(
            cutoff=int(payload["cutoff"]),
            mult={_parse_beta(key): int(value) for key, value in payload.get("mult", {}).items()},
        )


@dataclass
class ConditionCheck:
    """Outcome of one named assertion over a truncated module."""

    name: str
    passed: bool
    detail: str = ""
    inconclusive: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class ModuleReport:
    title: str
    cutoff: int
    checks: List[ConditionCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)

    def check(self, name: str) -> ConditionCheck:
        for item in self.checks:
            if item.name == name:
                return item
        raise KeyError(name)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "title": self.title,
            "cutoff": self.cutoff,
            "passed": self.passed,
            "checks": [item.to_dict() for item in self.checks],
        }


@dataclass
class Component:
    beta: Beta
    weight: Weight
    multiplicity: int

    def to_dict(self) -> Dict[str, Any]:
        return {"beta": list(self.beta), "weight": self.weight.to_dict(), "multiplicity": self.multiplicity}


@dataclass
class DecompositionReport:
    cutoff: int
    components: List[Component] = field(default_factory=list)
    character_matches: bool = True
    mismatches: List[Beta] = field(default_factory=list)
    note: str = ""

    def multiplicities(self) -> Dict[Beta, int]:
        return {component.beta: component.multiplicity for component in self.components}

    def to_dict(self) -> Dict[str, Any]:
        return {
            "cutoff": self.cutoff,
            "components": [component.to_dict() for component in self.components],
            "character_matches": self.character_matches,
            "mismatches": [list(beta) for beta in self.mismatches],
            "note": self.note,
        }


@dataclass
class RunConfig:
    datum_path: str
    command: str
    cutoff: int
    weight_spec: List[int] = field(default_factory=list)
    shift: List[int] = field(default_factory=list)
    output_format: str = "text"
    tau_path: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class StringClassification:
    """Structure of the rank-1 string algebra at one node, with the relations that were checked."""

    node: str
    tag: str
    witnesses: List[ConditionCheck] = field(default_factory=list)

    @property
    def confirmed(self) -> bool:
        return all(item.passed for item in self.witnesses)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "node": self.node,
            "tag": self.tag,
            "confirmed": self.confirmed,
            "witnesses": [item.to_dict() for item in self.witnesses],
        }


@dataclass
class StringComponent:
    """Highest-weight vectors for one node's string algebra inside a weight space."""

    beta: Beta
    pairing: int
    multiplicity: int
    shape: str
    length: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        payload = asdict(self)
        payload["beta"] = list(self.beta)
        return payload
