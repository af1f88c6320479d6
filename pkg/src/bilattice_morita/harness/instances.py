"""Reading and writing instance documents.

An instance document is a JSON object::

    {
      "format": "bilattice-morita/instance",
      "version": 1,
      "prng": "numpy.PCG64",
      "grounds":    {"H": 2, "K": 3},
      "relations":  {"E": {"source": "H", "target": "K", "pairs": [[0, 0], [1, 2]]}},
      "bilattices": {"S": {"left": "H", "right": "K", "pairs": [[[], []], [[0], [1, 2]]]}},
      "point_maps": {"theta": {"source": "K", "target": "H", "table": [0, 0, 1]}},
      "homs":       {"h": {"source": "S", "target": "T",
                           "phi": [[[], []], [[0], [0, 1]]],
                           "psi": [[[], []], [[0], [0]]]}}
    }

Every section except ``format`` and ``version`` is optional. Atoms are
0-based; a relation pair ``[a, b]`` joins source atom ``a`` to target atom
``b``; a bilattice pair ``[P, Q]`` lists the members of both projections; a
hom lists ``[P, phi(P)]`` over the left slice of its source and ``[Q, psi(Q)]``
over the right slice. Relation pairs are sorted; projection pairs are listed
in ascending order of their bitmask encodings (``sum(2**atom)``). :func:`dumps`
emits sorted keys and a fixed layout, so equal instances serialize to
identical bytes.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from ..bilattice import Bilattice, BilatticeHom, check_bilattice_laws, slices
from ..bimodule import Relation
from ..errors import InvalidInstance
from ..inverse_image import PointMap
from ..lattice import LatticeHom
from ..spaces import GroundSpace, mask_of, members_of
from .generators import PRNG_NAME

FORMAT = "bilattice-morita/instance"
VERSION = 1
SECTIONS = ("grounds", "relations", "bilattices", "point_maps", "homs")


def ground_name(g: GroundSpace) -> str:
    return g.label or f"n{g.size}"


@dataclass
class Instance:
    grounds: dict[str, GroundSpace] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)
    bilattices: dict[str, Bilattice] = field(default_factory=dict)
    point_maps: dict[str, PointMap] = field(default_factory=dict)
    homs: dict[str, BilatticeHom] = field(default_factory=dict)
    prng: str = PRNG_NAME

    @classmethod
    def build(cls, *, relations=None, bilattices=None, point_maps=None, homs=None) -> Instance:
        """Collect named objects, registering their grounds (and hom endpoints) on the way."""
        inst = cls(relations=dict(relations or {}), bilattices=dict(bilattices or {}),
                   point_maps=dict(point_maps or {}), homs=dict(homs or {}))
        for name, h in inst.homs.items():
            for end, S in (("source", h.source), ("target", h.target)):
                if not any(S == T for T in inst.bilattices.values()):
                    inst.bilattices[f"{name}.{end}"] = S
        for R in inst.relations.values():
            inst._register(R.source, R.target)
        for S in inst.bilattices.values():
            inst._register(S.left_ground, S.right_ground)
        for f in inst.point_maps.values():
            inst._register(f.source, f.target)
        return inst

    def _register(self, *gs: GroundSpace) -> None:
        for g in gs:
            name = ground_name(g)
            old = self.grounds.setdefault(name, g)
            if old != g:
                raise InvalidInstance(f"two different grounds are both called {name!r}")

    def _name_of_ground(self, g: GroundSpace) -> str:
        name = ground_name(g)
        if self.grounds.get(name) != g:
            raise InvalidInstance(f"ground {g!r} is not registered")
        return name

    def _name_of_bilattice(self, S: Bilattice) -> str:
        for name in sorted(self.bilattices):
            if self.bilattices[name] == S:
                return name
        raise InvalidInstance("hom endpoint is not a registered bilattice")

    # -- selection helpers used by the command line ----------------------
    def pick(self, section: str, name: str | None = None):
        items = getattr(self, section)
        if name is not None:
            if name not in items:
                raise InvalidInstance(f"no {section[:-1].replace('_', ' ')} named {name!r}")
            return items[name]
        if len(items) != 1:
            raise InvalidInstance(f"expected exactly one entry in {section!r}, found {len(items)}")
        return next(iter(items.values()))

    # -- encoding --------------------------------------------------------
    def to_dict(self) -> dict:
        doc: dict[str, Any] = {"format": FORMAT, "version": VERSION, "prng": self.prng}
        doc["grounds"] = {n: g.size for n, g in self.grounds.items()}
        if self.relations:
            doc["relations"] = {n: {"source": self._name_of_ground(R.source),
                                    "target": self._name_of_ground(R.target),
                                    "pairs": [list(p) for p in R.pairs]}
                                for n, R in self.relations.items()}
        if self.bilattices:
            doc["bilattices"] = {n: {"left": self._name_of_ground(S.left_ground),
                                     "right": self._name_of_ground(S.right_ground),
                                     "pairs": _pair_lists(S.pairs)}
                                 for n, S in self.bilattices.items()}
        if self.point_maps:
            doc["point_maps"] = {n: {"source": self._name_of_ground(f.source),
                                     "target": self._name_of_ground(f.target),
                                     "table": list(f.table)}
                                 for n, f in self.point_maps.items()}
        if self.homs:
            doc["homs"] = {n: {"source": self._name_of_bilattice(h.source),
                               "target": self._name_of_bilattice(h.target),
                               "phi": _pair_lists(sorted(h.phi.table.items())),
                               "psi": _pair_lists(sorted(h.psi.table.items()))}
                           for n, h in self.homs.items()}
        return doc


def _pair_lists(pairs) -> list:
    return [[list(members_of(a)), list(members_of(b))] for a, b in pairs]


def _format(x: Any, depth: int) -> str:
    if not isinstance(x, dict) or not x:
        return json.dumps(x, sort_keys=True, separators=(", ", ": "))
    pad = "  " * (depth + 1)
    body = ",\n".join(f"{pad}{json.dumps(k)}: {_format(x[k], depth + 1)}" for k in sorted(x))
    return "{\n" + body + "\n" + "  " * depth + "}"


def dumps(inst: Instance) -> str:
    """Canonical text: sorted keys, objects indented by two spaces, arrays on one line."""
    return _format(inst.to_dict(), 0) + "\n"


def save(inst: Instance, path: str | Path) -> None:
    Path(path).write_text(dumps(inst))


# -- decoding ----------------------------------------------------------------

def _need(cond: bool, msg: str) -> None:
    if not cond:
        raise InvalidInstance(msg)


def _index(x, size: int, what: str) -> int:
    _need(isinstance(x, int) and not isinstance(x, bool), f"{what}: {x!r} is not an integer")
    _need(0 <= x < size, f"{what}: index {x} outside 0..{size - 1}")
    return x


def _members(xs, g: GroundSpace, what: str) -> int:
    _need(isinstance(xs, list), f"{what}: expected a list of atoms")
    idx = [_index(x, g.size, what) for x in xs]
    _need(len(set(idx)) == len(idx), f"{what}: repeated atom")
    return mask_of(idx)


def _obj(doc, key: str, what: str) -> dict:
    val = doc.get(key, {})
    _need(isinstance(val, dict), f"{what} must be an object")
    return val


def from_dict(doc: Any) -> Instance:
    _need(isinstance(doc, dict), "instance must be a JSON object")
    _need(doc.get("format") == FORMAT, f"format must be {FORMAT!r}")
    _need(doc.get("version") == VERSION, f"unsupported version {doc.get('version')!r}")
    unknown = set(doc) - {"format", "version", "prng", *SECTIONS}
    _need(not unknown, f"unknown fields {sorted(unknown)}")
    inst = Instance(prng=doc.get("prng", PRNG_NAME))

    for name, size in _obj(doc, "grounds", "grounds").items():
        _need(isinstance(size, int) and not isinstance(size, bool) and size >= 1,
              f"ground {name!r}: size must be a positive integer")
        inst.grounds[name] = GroundSpace(size, name)

    def ground(ref, what):
        _need(ref in inst.grounds, f"{what}: unknown ground {ref!r}")
        return inst.grounds[ref]

    for name, spec in _obj(doc, "relations", "relations").items():
        what = f"relation {name!r}"
        _need(isinstance(spec, dict), f"{what} must be an object")
        src, tgt = ground(spec.get("source"), what), ground(spec.get("target"), what)
        pairs = spec.get("pairs", [])
        _need(isinstance(pairs, list), f"{what}: pairs must be a list")
        cells = []
        for p in pairs:
            _need(isinstance(p, list) and len(p) == 2, f"{what}: pair {p!r} is not [a, b]")
            cells.append((_index(p[0], src.size, what), _index(p[1], tgt.size, what)))
        inst.relations[name] = Relation.from_pairs(src, tgt, cells)

    for name, spec in _obj(doc, "bilattices", "bilattices").items():
        what = f"bilattice {name!r}"
        _need(isinstance(spec, dict), f"{what} must be an object")
        gl, gr = ground(spec.get("left"), what), ground(spec.get("right"), what)
        pairs = spec.get("pairs", [])
        _need(isinstance(pairs, list), f"{what}: pairs must be a list")
        got = []
        for p in pairs:
            _need(isinstance(p, list) and len(p) == 2, f"{what}: pair {p!r} is not [P, Q]")
            got.append((_members(p[0], gl, what), _members(p[1], gr, what)))
        S = Bilattice.from_pairs(gl, gr, got)
        law = check_bilattice_laws(S)
        _need(law.ok, f"{what} is not a bilattice: " + "; ".join(o.law for o in law.failures))
        inst.bilattices[name] = S

    for name, spec in _obj(doc, "point_maps", "point_maps").items():
        what = f"point map {name!r}"
        _need(isinstance(spec, dict), f"{what} must be an object")
        src, tgt = ground(spec.get("source"), what), ground(spec.get("target"), what)
        table = spec.get("table")
        _need(isinstance(table, list) and len(table) == src.size, f"{what}: table needs one entry per source atom")
        inst.point_maps[name] = PointMap(src, tgt, tuple(_index(t, tgt.size, what) for t in table))

    for name, spec in _obj(doc, "homs", "homs").items():
        what = f"hom {name!r}"
        _need(isinstance(spec, dict), f"{what} must be an object")
        _need(spec.get("source") in inst.bilattices and spec.get("target") in inst.bilattices,
              f"{what}: source and target must name bilattices")
        S1, S2 = inst.bilattices[spec["source"]], inst.bilattices[spec["target"]]
        (l1, r1), (l2, r2) = slices(S1), slices(S2)
        phi = _slice_table(spec.get("phi"), l1, l2, what + " phi")
        psi = _slice_table(spec.get("psi"), r1, r2, what + " psi")
        inst.homs[name] = BilatticeHom(phi, psi, S1, S2)
    return inst


def _slice_table(rows, L1, L2, what: str) -> LatticeHom:
    _need(isinstance(rows, list), f"{what}: expected a list of [from, to] pairs")
    table = {}
    for r in rows:
        _need(isinstance(r, list) and len(r) == 2, f"{what}: entry {r!r} is not [from, to]")
        a, b = _members(r[0], L1.ground, what), _members(r[1], L2.ground, what)
        _need(a not in table, f"{what}: {list(members_of(a))} listed twice")
        table[a] = b
    _need(set(table) == set(L1.elements), f"{what}: table must cover the whole source slice")
    return LatticeHom(L1, L2, table)


def loads(text: str) -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidInstance(f"not valid JSON: {exc}") from exc
    return from_dict(doc)


def load(path: str | Path) -> Instance:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise InvalidInstance(f"cannot read {path}: {exc}") from exc
    return loads(text)


GOLDEN_NAMES = ("a3", "collapse", "diag2", "diag_a3_iso", "e_tri", "morita_diag_a3")


def golden_text(name: str) -> str:
    """Raw text of a pinned instance shipped in ``bilattice_morita/data/golden``."""
    from importlib.resources import files
    if name not in GOLDEN_NAMES:
        raise InvalidInstance(f"unknown golden instance {name!r}")
    return files("bilattice_morita").joinpath("data", "golden", f"{name}.json").read_text()


def load_golden(name: str) -> Instance:
    return loads(golden_text(name))
