"""Command-line front end.

Every command reads instance documents (see ``harness.instances``) and
prints either a text summary or, with ``--format json``, one JSON object::

    {"command": "...", "ok": true, "result": {...}, "reports": [...], "instance": {...} | null}

``instance`` is a complete instance document holding whatever the command
built (an essential bilattice, a witness, a pullback), so it can be fed back
into another command; ``--out FILE`` writes it to disk in canonical form.

Exit codes: 0 everything held, 1 a law was violated, 2 invalid input,
3 a size cap was hit.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import Sequence

from .bilattice import Bilattice, bil_of, essential_bilattice, hom_check, iso_search, m_of
from .bimodule import Relation
from .errors import BilatticeError, InternalInconsistency, InvalidInstance, SizeLimitExceeded
from .harness.generators import GeneratorConfig
from .harness.instances import Instance, dumps, load
from .harness.suite import GROUPS, run_suite
from .inverse_image import PointMap, check_inverse_image, check_nonzero_transfer, pullback
from .limits import use_limits
from .morita import MoritaWitness, decide_morita, verify_morita
from .report import Report, _plain
from .spaces import GroundSpace, members_of

EXIT_OK, EXIT_LAW, EXIT_INPUT, EXIT_CAP = 0, 1, 2, 3


class Outcome:
    def __init__(self, command: str, result: dict | None = None, reports: Sequence[Report] = (),
                 instance: Instance | None = None, text: str = "", ok: bool | None = None):
        self.command, self.result, self.reports = command, result or {}, list(reports)
        self.instance, self.text = instance, text
        self.ok = all(r.ok for r in self.reports) if ok is None else ok

    def to_dict(self) -> dict:
        return {"command": self.command, "ok": self.ok, "result": _plain(self.result),
                "reports": [r.to_dict() for r in self.reports],
                "instance": self.instance.to_dict() if self.instance is not None else None}

    def render(self) -> str:
        parts = [self.text] if self.text else []
        parts += [r.render() for r in self.reports]
        return "\n".join(parts)


# -- helpers ------------------------------------------------------------------

def _relabel_relation(R: Relation, src: str, tgt: str) -> Relation:
    return Relation(GroundSpace(R.source.size, src), GroundSpace(R.target.size, tgt), R.rows)


def _relabel_bilattice(S: Bilattice, left: str, right: str) -> Bilattice:
    return Bilattice(GroundSpace(S.left_ground.size, left), GroundSpace(S.right_ground.size, right), S.pairs)


def _bilattice_or_essential(inst: Instance, name: str | None) -> Bilattice:
    if inst.bilattices:
        return inst.pick("bilattices", name)
    return essential_bilattice(inst.pick("relations", name))


def _describe_relation(name: str, R: Relation) -> str:
    return f"{name}: {R.source.size}x{R.target.size}, {len(R)} cells {R.pairs}"


def _describe_bilattice(name: str, S: Bilattice) -> str:
    lines = [f"{name}: {len(S)} pairs on {S.left_ground.size}x{S.right_ground.size}"]
    lines += [f"  ({list(P)}, {list(Q)})" for P, Q in
              ((tuple(p.members), tuple(q.members)) for p, q in S.proj_pairs())]
    return "\n".join(lines)


# -- commands -----------------------------------------------------------------

def cmd_essential(args) -> Outcome:
    E = load(args.file).pick("relations", args.name)
    S = essential_bilattice(E)
    rep = Report("essential bilattice")
    rep.add("m_of(essential(E)) = E", m_of(S) == E)
    return Outcome("essential", {"pairs": len(S)}, [rep],
                   Instance.build(relations={"E": E}, bilattices={"essential": S}),
                   _describe_bilattice("essential", S))


def cmd_mofs(args) -> Outcome:
    S = load(args.file).pick("bilattices", args.name)
    E = m_of(S)
    return Outcome("mofs", {"cells": len(E)}, [], Instance.build(relations={"m_of": E}, bilattices={"S": S}),
                   _describe_relation("m_of", E))


def cmd_bil(args) -> Outcome:
    E = load(args.file).pick("relations", args.name)
    S = bil_of(E)
    return Outcome("bil", {"pairs": len(S)}, [], Instance.build(relations={"E": E}, bilattices={"bil": S}),
                   _describe_bilattice("bil", S))


def cmd_hom_check(args) -> Outcome:
    h = load(args.file).pick("homs", args.name)
    rep = hom_check(h)
    return Outcome("hom check", {"valid": rep.ok}, [rep])


def cmd_iso_find(args) -> Outcome:
    S1 = _relabel_bilattice(_bilattice_or_essential(load(args.file1), args.name1), "H1", "H2")
    S2 = _relabel_bilattice(_bilattice_or_essential(load(args.file2), args.name2), "K1", "K2")
    h = iso_search(S1, S2)
    homs = {"iso": h} if h is not None else {}
    text = "isomorphic" if h is not None else "not isomorphic"
    if h is not None:
        for label, table in (("phi", h.phi.table), ("psi", h.psi.table)):
            text += f"\n  {label}: " + ", ".join(f"{list(members_of(a))}->{list(members_of(b))}"
                                                for a, b in sorted(table.items()))
    return Outcome("iso find", {"isomorphic": h is not None}, [],
                   Instance.build(bilattices={"S1": S1, "S2": S2}, homs=homs), text, ok=True)


def cmd_morita_decide(args) -> Outcome:
    E1 = _relabel_relation(load(args.file1).pick("relations", args.name1), "H1", "H2")
    E2 = _relabel_relation(load(args.file2).pick("relations", args.name2), "K1", "K2")
    got = decide_morita(E1, E2)
    if got is None:
        return Outcome("morita decide", {"equivalent": False}, [], Instance.build(relations={"E1": E1, "E2": E2}),
                       "not Morita equivalent", ok=True)
    h, w = got
    rep = verify_morita(E1, E2, w)
    rels = {"E1": E1, "E2": E2, "V1": w.V1, "V2": w.V2, "W1": w.W1, "W2": w.W2}
    text = "Morita equivalent\n" + "\n".join(_describe_relation(k, rels[k]) for k in ("V1", "V2", "W1", "W2"))
    return Outcome("morita decide", {"equivalent": True}, [rep], Instance.build(relations=rels, homs={"iso": h}), text)


def cmd_morita_verify(args) -> Outcome:
    inst = load(args.file)
    need = ("E1", "E2", "V1", "V2", "W1", "W2")
    missing = [k for k in need if k not in inst.relations]
    if missing:
        raise InvalidInstance(f"morita verify needs relations {list(need)}; missing {missing}")
    r = inst.relations
    rep = verify_morita(r["E1"], r["E2"], MoritaWitness(r["V1"], r["V2"], r["W1"], r["W2"]))
    return Outcome("morita verify", {"valid": rep.ok}, [rep])


def _pullback_inputs(args) -> tuple[PointMap, PointMap, Relation]:
    inst = load(args.file)
    return (inst.pick("point_maps", "theta"), inst.pick("point_maps", "rho"),
            inst.pick("relations", args.name))


def cmd_pullback(args) -> Outcome:
    theta, rho, E1 = _pullback_inputs(args)
    E = pullback(theta, rho, E1)
    return Outcome("pullback", {"cells": len(E)}, [],
                   Instance.build(relations={"E1": E1, "pullback": E}, point_maps={"theta": theta, "rho": rho}),
                   _describe_relation("pullback", E))


def cmd_inverse_check(args) -> Outcome:
    theta, rho, E1 = _pullback_inputs(args)
    return Outcome("inverse check", {}, [check_inverse_image(theta, rho, E1), check_nonzero_transfer(theta, rho, E1)])


def cmd_proptest(args) -> Outcome:
    cfg = GeneratorConfig(seed=args.seed, max_size=args.max_size, count=args.count)
    groups = None
    if args.groups is not None:
        groups = [g for chunk in args.groups for g in chunk.split(",") if g]
        bad = sorted(set(groups) - set(GROUPS))
        if bad:
            raise InvalidInstance(f"unknown groups {bad}; choose from {list(GROUPS)}")
    suite = run_suite(cfg, groups, mutate=args.mutate)
    out = Outcome("proptest", suite.to_dict(), [], None, suite.render(), ok=suite.ok)
    return out


# -- parser -------------------------------------------------------------------

def _leaf(sub, name: str, func, help: str):
    p = sub.add_parser(name, help=help)
    p.set_defaults(func=func)
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--cap-elements", type=int, default=None, help="cap on generated family sizes")
    p.add_argument("--cap-nodes", type=int, default=None, help="cap on isomorphism search nodes")
    p.add_argument("--out", default=None, help="write the resulting instance document here")
    return p


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bilattice-morita",
                                     description="Finite CSLs, bimodule supports, bilattices and Morita equivalence.")
    sub = parser.add_subparsers(dest="command", required=True)

    for name, func, what in (("essential", cmd_essential, "essential bilattice of a relation"),
                             ("mofs", cmd_mofs, "support relation annihilated by a bilattice"),
                             ("bil", cmd_bil, "all rectangle pairs missing a relation")):
        p = _leaf(sub, name, func, what)
        p.add_argument("file")
        p.add_argument("--name", default=None, help="entry to use when the file holds several")

    hom = sub.add_parser("hom", help="bilattice homomorphisms").add_subparsers(dest="action", required=True)
    p = _leaf(hom, "check", cmd_hom_check, "validate a homomorphism table")
    p.add_argument("file")
    p.add_argument("--name", default=None)

    iso = sub.add_parser("iso", help="bilattice isomorphisms").add_subparsers(dest="action", required=True)
    p = _leaf(iso, "find", cmd_iso_find, "search for an isomorphism (relations are replaced by essential bilattices)")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--name1", default=None)
    p.add_argument("--name2", default=None)

    mor = sub.add_parser("morita", help="spatial Morita equivalence").add_subparsers(dest="action", required=True)
    p = _leaf(mor, "decide", cmd_morita_decide, "decide equivalence and build a witness")
    p.add_argument("file1")
    p.add_argument("file2")
    p.add_argument("--name1", default=None)
    p.add_argument("--name2", default=None)
    p = _leaf(mor, "verify", cmd_morita_verify, "check a witness (relations E1 E2 V1 V2 W1 W2)")
    p.add_argument("file")

    p = _leaf(sub, "pullback", cmd_pullback, "pull a relation back along point maps theta and rho")
    p.add_argument("file")
    p.add_argument("--name", default=None, help="relation to pull back")

    inv = sub.add_parser("inverse", help="inverse-image pipeline").add_subparsers(dest="action", required=True)
    p = _leaf(inv, "check", cmd_inverse_check, "check the inverse-image laws for theta, rho and a relation")
    p.add_argument("file")
    p.add_argument("--name", default=None)

    p = _leaf(sub, "proptest", cmd_proptest, "run the seeded property suite")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--count", type=int, default=None, help="random instances per group (default: per-group counts)")
    p.add_argument("--max-size", type=int, default=6, help="largest ground size drawn")
    p.add_argument("--groups", nargs="+", default=None, help=f"subset of {', '.join(GROUPS)}")
    p.add_argument("--mutate", action="store_true", help="also run witness mutation testing")
    return parser


def _emit(args, payload: dict | None, text: str) -> None:
    if args.format == "json":
        print(json.dumps(payload, sort_keys=True))
    else:
        print(text)


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    fmt = getattr(args, "format", "text")

    def fail(code: int, kind: str, exc: Exception) -> int:
        msg = f"{kind}: {exc}"
        if fmt == "json":
            print(json.dumps({"command": args.command, "ok": False, "error": kind, "message": str(exc)}, sort_keys=True))
        else:
            print(msg, file=sys.stderr)
        return code

    try:
        with use_limits(elements=args.cap_elements, nodes=args.cap_nodes):
            out = args.func(args)
    except SizeLimitExceeded as exc:
        return fail(EXIT_CAP, "size limit", exc)
    except InternalInconsistency as exc:
        return fail(EXIT_LAW, "internal inconsistency", exc)
    except (BilatticeError, ValueError) as exc:
        return fail(EXIT_INPUT, "invalid input", exc)

    if args.out and out.instance is not None:
        Path(args.out).write_text(dumps(out.instance))
    _emit(args, out.to_dict(), out.render())
    return EXIT_OK if out.ok else EXIT_LAW


if __name__ == "__main__":
    sys.exit(main())
