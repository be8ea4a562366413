"""Oriented link diagrams in PD form and their resolution webs.

Input format (JSON)::

    {"name": "trefoil", "pd": [[1,5,2,4], ...], "signs": [1, 1, 1],
     "loops": 0, "basepoints": {"p": 1, "q": 3}}

Each crossing lists its four arcs counterclockwise starting from the
incoming under-arc.  ``signs`` is +1 (the over-strand runs from the fourth
slot to the second) or -1 (it runs from the second slot to the fourth); it is
required, and checked for consistency with a global orientation.  ``loops``
counts crossingless unknotted components.  Basepoints name arcs; loop
``k`` is addressed as ``"o<k>"``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

from .foam import SMOOTH, WIDE, Site, Web


class DiagramError(ValueError):
    pass


@dataclass
class LinkDiagram:
    pd: list  # list of 4-tuples of arc ids
    signs: list  # +1 / -1 per crossing
    loops: int = 0
    basepoints: dict = field(default_factory=dict)
    name: str = ""

    def __post_init__(self):
        self.pd = [tuple(x) for x in self.pd]
        self.signs = [int(s) for s in self.signs]
        self.validate()

    # ----------------------------------------------------------------
    @property
    def n(self) -> int:
        return len(self.pd)

    @property
    def n_plus(self) -> int:
        return sum(1 for s in self.signs if s > 0)

    @property
    def n_minus(self) -> int:
        return self.n - self.n_plus

    def site(self, c: int) -> Site:
        i, j, k, l = self.pd[c]
        if self.signs[c] > 0:
            return Site(c, l, i, k, j)
        return Site(c, i, j, l, k)

    def validate(self):
        if len(self.signs) != len(self.pd):
            raise DiagramError("need one sign per crossing")
        if any(s not in (1, -1) for s in self.signs):
            raise DiagramError("signs must be +1 or -1")
        if any(len(x) != 4 for x in self.pd):
            raise DiagramError("each crossing lists four arcs")
        if self.loops < 0:
            raise DiagramError("loops must be nonnegative")
        count: dict = {}
        for x in self.pd:
            for a in x:
                count[a] = count.get(a, 0) + 1
        bad = [a for a, k in count.items() if k != 2]
        if bad:
            raise DiagramError(f"arcs {bad} do not appear exactly twice")
        heads, tails = {}, {}
        for c in range(self.n):
            s = self.site(c)
            for a in (s.in_L, s.in_R):
                if a in heads:
                    raise DiagramError(f"arc {a} enters two crossings; signs inconsistent with orientation")
                heads[a] = c
            for a in (s.out_L, s.out_R):
                if a in tails:
                    raise DiagramError(f"arc {a} leaves two crossings; signs inconsistent with orientation")
                tails[a] = c
        for m, a in self.basepoints.items():
            if a not in count and not (isinstance(a, str) and a.startswith("o") and a[1:].isdigit()
                                         and int(a[1:]) < self.loops):
                raise DiagramError(f"basepoint {m} names unknown arc {a}")

    @property
    def arcs(self) -> list:
        return sorted({a for x in self.pd for a in x}, key=repr)

    def web(self, N: int) -> Web:
        return Web(N, [self.site(c) for c in range(self.n)], list(range(self.loops)))

    def resolution_states(self, v) -> dict:
        """Map a 0/1 vector to site states.

        Positive crossings: 0 is the wide edge and 1 the oriented smoothing.
        Negative crossings: 0 is the smoothing and 1 the wide edge.
        """
        out = {}
        for c, bit in enumerate(v):
            wide = (bit == 0) if self.signs[c] > 0 else (bit == 1)
            out[c] = WIDE if wide else SMOOTH
        return out

    def basepoint_edge(self, marker):
        a = self.basepoints.get(marker, marker)
        if isinstance(a, str) and a.startswith("o") and a[1:].isdigit():
            return ("o", int(a[1:]))
        if a not in {x for t in self.pd for x in t}:
            raise DiagramError(f"unknown basepoint {marker!r}")
        return ("a", a)

    def components(self) -> list[list]:
        """Link components as lists of arcs (loops as ["o<k>"])."""
        nxt = {}
        for c in range(self.n):
            s = self.site(c)
            i, j, k, l = self.pd[c]
            # through-strands: under i -> k, over l -> j (+) or j -> l (-)
            nxt[i] = k
            if self.signs[c] > 0:
                nxt[l] = j
            else:
                nxt[j] = l
        seen = set()
        comps = []
        for a in self.arcs:
            if a in seen:
                continue
            cyc = []
            while a not in seen:
                seen.add(a)
                cyc.append(a)
                a = nxt[a]
            comps.append(cyc)
        comps += [[f"o{k}"] for k in range(self.loops)]
        return comps

    def component_of(self, marker) -> int:
        e = self.basepoint_edge(marker)
        target = f"o{e[1]}" if e[0] == "o" else e[1]
        for i, comp in enumerate(self.components()):
            if target in comp:
                return i
        raise DiagramError(f"basepoint {marker} not on any component")

    def mirror(self) -> "LinkDiagram":
        pd = []
        for (i, j, k, l), s in zip(self.pd, self.signs):
            pd.append((l, i, j, k) if s > 0 else (j, k, l, i))
        return LinkDiagram(pd, [-s for s in self.signs], self.loops, dict(self.basepoints),
                           (self.name + " mirror").strip())

    def disjoint_union(self, other: "LinkDiagram") -> "LinkDiagram":
        off = max([a for a in self.arcs if isinstance(a, int)], default=0)
        pd = list(self.pd) + [tuple(a + off for a in x) for x in other.pd]
        bps = dict(self.basepoints)
        for m, a in other.basepoints.items():
            key = m if m not in bps else f"{m}'"
            if isinstance(a, str):
                bps[key] = f"o{int(a[1:]) + self.loops}"
            else:
                bps[key] = a + off
        return LinkDiagram(pd, self.signs + other.signs, self.loops + other.loops, bps,
                           f"{self.name} + {other.name}")

    # ----------------------------------------------------------------
    def to_json(self) -> dict:
        return {"name": self.name, "pd": [list(x) for x in self.pd], "signs": self.signs,
                "loops": self.loops, "basepoints": dict(self.basepoints)}

    @classmethod
    def from_json(cls, data: Mapping) -> "LinkDiagram":
        if data.get("version", 1) != 1:
            raise DiagramError(f"unsupported diagram format version {data.get('version')!r}")
        try:
            return cls(
                [tuple(x) for x in data["pd"]],
                list(data["signs"]),
                int(data.get("loops", 0)),
                dict(data.get("basepoints", {})),
                str(data.get("name", "")),
            )
        except (KeyError, TypeError) as exc:
            raise DiagramError(f"malformed diagram JSON: {exc}") from exc

    @classmethod
    def load(cls, path) -> "LinkDiagram":
        with open(path) as fh:
            return cls.from_json(json.load(fh))


def bundled_path(name: str) -> Path:
    return Path(__file__).parent / "data" / f"{name}.json"


def bundled(name: str) -> LinkDiagram:
    return LinkDiagram.load(bundled_path(name))


def bundled_names() -> list[str]:
    d = Path(__file__).parent / "data"
    return sorted(p.stem for p in d.glob("*.json") if not p.stem.startswith(("graph_", "foam_")))
