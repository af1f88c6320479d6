"""Spatial Morita equivalence of pattern bimodules.

Conventions.  ``E1`` lives on ``H1 -> H2`` and ``E2`` on ``K1 -> K2``.  A
witness consists of ``V1: H1 -> K1``, ``V2: H2 -> K2``, ``W1: K1 -> H1`` and
``W2: K2 -> H2``.  Operator products are written as composition chains in
application order, so ``[W2 U2 V1]`` is ``span_compose([V1, E2, W2])``.

All witness relations are built as constraint patterns: a cell is present
unless some lattice element forces it to zero.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .bilattice import (
    Bilattice, BilatticeHom, as_csl, bilattice_generate, encode_pair, essential_bilattice,
    hom_check, is_onto, iso_search, m_of, slices, sum_ground,
)
from .bimodule import Relation, is_nondegenerate, is_preorder, nonzero_witness, span_compose, transpose
from .errors import DegenerateRelation, GroundMismatch, InternalInconsistency
from .lattice import CSL, LatticeHom, alg_of_lattice, lat_of_relation
from .report import Report
from .spaces import GroundSpace, iter_bits


@dataclass(frozen=True)
class MoritaWitness:
    V1: Relation
    V2: Relation
    W1: Relation
    W2: Relation

    def replace(self, **kw) -> MoritaWitness:
        d = {"V1": self.V1, "V2": self.V2, "W1": self.W1, "W2": self.W2}
        d.update(kw)
        return MoritaWitness(**d)


@dataclass(frozen=True)
class MoritaConfig:
    E1: Relation
    E2: Relation
    witness: MoritaWitness
    hom: BilatticeHom | None = None

    def __post_init__(self):
        for E in (self.E1, self.E2):
            if not is_nondegenerate(E):
                raise DegenerateRelation(f"Morita configurations need nondegenerate bimodules, got {E}")


def op_of_hom(theta: LatticeHom) -> Relation:
    """``Op(theta)``: (x, x') present iff x in P forces x' in theta(P) for every P."""
    src, tgt = theta.source.ground, theta.target.ground
    rows = []
    for x in range(src.size):
        r = tgt.full
        for P in theta.source.elements:
            if P >> x & 1:
                r &= theta.table[P]
        rows.append(r)
    return Relation(src, tgt, tuple(rows))


def witnesses_from_hom(S1: Bilattice, S2: Bilattice, h: BilatticeHom) -> MoritaWitness:
    """The four constraint patterns attached to a bilattice homomorphism ``phi + psi``.

    * ``V1``: ``phi(P)^perp T P = 0``
    * ``V2``: ``psi(Q) T Q^perp = 0``
    * ``W1``: ``P^perp T phi(P) = 0``
    * ``W2``: ``Q T psi(Q)^perp = 0``
    """
    if h.source != S1 or h.target != S2:
        raise GroundMismatch("homomorphism does not run between the given bilattices")
    H1, H2 = S1.left_ground, S1.right_ground
    K1, K2 = S2.left_ground, S2.right_ground
    phi, psi = h.phi.table, h.psi.table
    Sl, Sr = h.phi.source.elements, h.psi.source.elements

    V1 = op_of_hom(h.phi)

    W1 = [H1.full] * K1.size
    for P in Sl:
        for k in iter_bits(phi[P]):
            W1[k] &= P

    V2 = [K2.full] * H2.size
    for Q in Sr:
        for y in iter_bits(H2.full & ~Q):
            V2[y] &= ~psi[Q]

    W2 = [H2.full] * K2.size
    for Q in Sr:
        for k in iter_bits(K2.full & ~psi[Q]):
            W2[k] &= ~Q

    return MoritaWitness(
        V1=V1,
        V2=Relation(H2, K2, tuple(r & K2.full for r in V2)),
        W1=Relation(K1, H1, tuple(W1)),
        W2=Relation(K2, H2, tuple(r & H2.full for r in W2)),
    )


def _eq_law(rep: Report, name: str, got: Relation, want: Relation) -> bool:
    if (got.source, got.target) != (want.source, want.target):
        return rep.add(name, False, detail="ground spaces differ")
    extra, missing = got.difference(want), want.difference(got)
    return rep.add(name, not extra and not missing,
                   {"extra": extra[:10], "missing": missing[:10]} if extra or missing else None)


def _sub_law(rep: Report, name: str, got: Relation, bound: Relation) -> bool:
    extra = got.difference(bound)
    return rep.add(name, not extra, {"extra": extra[:10]} if extra else None)


def _chain(rep: Report, name: str, chain) -> Relation | None:
    try:
        return span_compose(chain)
    except GroundMismatch as exc:
        rep.add(name, False, detail=str(exc))
        return None


def verify_morita(E1: Relation, E2: Relation, w: MoritaWitness) -> Report:
    """Check mutual generation and the four unital-algebra conditions."""
    for E in (E1, E2):
        if not is_nondegenerate(E):
            raise DegenerateRelation(f"Morita equivalence is defined for nondegenerate bimodules, got {E}")
    expected = {
        "V1": (E1.source, E2.source), "W1": (E2.source, E1.source),
        "V2": (E1.target, E2.target), "W2": (E2.target, E1.target),
    }
    for name, (s, t) in expected.items():
        R = getattr(w, name)
        if (R.source, R.target) != (s, t):
            raise GroundMismatch(f"{name} runs {R.source}->{R.target}, expected {s}->{t}")
    rep = Report("spatial Morita equivalence")
    _eq_law(rep, "U1 = [W2 U2 V1]", span_compose([w.V1, E2, w.W2]), E1)
    _eq_law(rep, "U2 = [V2 U1 W1]", span_compose([w.W1, E1, w.V2]), E2)
    for name, chain in (("[V1 W1] unital algebra", [w.W1, w.V1]),
                        ("[W1 V1] unital algebra", [w.V1, w.W1]),
                        ("[V2 W2] unital algebra", [w.W2, w.V2]),
                        ("[W2 V2] unital algebra", [w.V2, w.W2])):
        R = span_compose(chain)
        missing_diag = [i for i in range(R.source.size) if (i, i) not in R]
        ok = not missing_diag and is_preorder(R)
        rep.add(name, ok, {"missing diagonal": missing_diag} if missing_diag else
                (span_compose([R, R]).difference(R)[:10] if not ok else None))
    return rep


def decide_morita(E1: Relation, E2: Relation) -> tuple[BilatticeHom, MoritaWitness] | None:
    """Decide spatial Morita equivalence by comparing essential bilattices.

    On success the witness built from the isomorphism is verified before it is
    returned; a failed verification raises ``InternalInconsistency``.
    """
    S1, S2 = essential_bilattice(E1), essential_bilattice(E2)
    h = iso_search(S1, S2)
    if h is None:
        return None
    w = witnesses_from_hom(S1, S2, h)
    rep = verify_morita(E1, E2, w)
    if not rep.ok:
        raise InternalInconsistency("witness from a bilattice isomorphism failed verification:\n" + rep.render())
    return h, w


# -- the lattice P + Q^perp and Op(theta) -----------------------------------

def combined_lattice_iso(h: BilatticeHom) -> LatticeHom:
    """``theta: P + Q^perp -> phi(P) + psi(Q)^perp`` between the encoded lattices."""
    S1, S2 = h.source, h.target
    C1, C2 = as_csl(S1), as_csl(S2)
    table = {}
    for P, Q in S1.pairs:
        P2, Q2 = h((P, Q))
        table[encode_pair(S1.left_ground, S1.right_ground, P, Q)] = encode_pair(S2.left_ground, S2.right_ground, P2, Q2)
    return LatticeHom(C1, C2, table)


def check_op_theta_identities(theta: LatticeHom) -> Report:
    """For a CSL isomorphism theta: ``[Op(theta^-1) Op(theta)] = Alg(L1)`` and ``[Op(theta) Op(theta^-1)] = Alg(L2)``."""
    rep = Report("Op(theta) identities")
    inv = theta.inverse()
    fwd, back = op_of_hom(theta), op_of_hom(inv)
    _eq_law(rep, "[Op(theta^-1) Op(theta)] = Alg(L1)", span_compose([fwd, back]), alg_of_lattice(theta.source))
    _eq_law(rep, "[Op(theta) Op(theta^-1)] = Alg(L2)", span_compose([back, fwd]), alg_of_lattice(theta.target))
    return rep


def _block(R: Relation, src_off: int, src: GroundSpace, tgt_off: int, tgt: GroundSpace) -> Relation:
    rows = tuple((R.rows[src_off + a] >> tgt_off) & tgt.full for a in range(src.size))
    return Relation(src, tgt, rows)


def check_op_blocks(h: BilatticeHom, w: MoritaWitness | None = None) -> Report:
    """Block form of ``Op(theta)`` and ``Op(theta^-1)`` for an isomorphism ``h``.

    ``Op(theta) = [[V1, 0], [M(Z1), V2]]`` and ``Op(theta^-1) = [[W1, 0], [M(Z2), W2]]``
    with ``Z1 = {(P, psi(Q))}`` and ``Z2 = {(phi(P), Q)}``.
    """
    S1, S2 = h.source, h.target
    H1, H2, K1, K2 = S1.left_ground, S1.right_ground, S2.left_ground, S2.right_ground
    w = w or witnesses_from_hom(S1, S2, h)
    theta = combined_lattice_iso(h)
    fwd, back = op_of_hom(theta), op_of_hom(theta.inverse())
    Z1 = Bilattice.from_pairs(H1, K2, ((P, h.psi.table[Q]) for P, Q in S1.pairs))
    Z2 = Bilattice.from_pairs(K1, H2, ((h.phi.table[P], Q) for P, Q in S1.pairs))
    rep = Report("Op(theta) block form")
    # encoded grounds: H1 + H2 -> K1 + K2
    _eq_law(rep, "Op(theta): H1->K1 block = V1", _block(fwd, 0, H1, 0, K1), w.V1)
    _eq_law(rep, "Op(theta): H2->K1 block = 0", _block(fwd, H1.size, H2, 0, K1), Relation.empty(H2, K1))
    _eq_law(rep, "Op(theta): H1->K2 block = M(Z1)", _block(fwd, 0, H1, K1.size, K2), m_of(Z1))
    _eq_law(rep, "Op(theta): H2->K2 block = V2", _block(fwd, H1.size, H2, K1.size, K2), w.V2)
    _eq_law(rep, "Op(theta^-1): K1->H1 block = W1", _block(back, 0, K1, 0, H1), w.W1)
    _eq_law(rep, "Op(theta^-1): K2->H1 block = 0", _block(back, K1.size, K2, 0, H1), Relation.empty(K2, H1))
    _eq_law(rep, "Op(theta^-1): K1->H2 block = M(Z2)", _block(back, 0, K1, H1.size, H2), m_of(Z2))
    _eq_law(rep, "Op(theta^-1): K2->H2 block = W2", _block(back, K1.size, K2, H1.size, H2), w.W2)
    return rep


# -- lemma identities -------------------------------------------------------

def _maps_onto(rep: Report, name: str, R: Relation, src: CSL, tgt: CSL) -> None:
    img = {R.image(P) for P in src.elements}
    extra = sorted(img - set(tgt.elements))
    missing = sorted(set(tgt.elements) - img)
    rep.add(name, not extra and not missing,
            {"extra": extra[:10], "missing": missing[:10]} if extra or missing else None)


def _meet_preserving(rep: Report, name: str, R: Relation, family) -> None:
    bad = [(P1, P2) for P1, P2 in combinations(family, 2) if R.image(P1 & P2) != R.image(P1) & R.image(P2)]
    rep.add(name, not bad, bad[:10] or None)


def _pairs_image(R_left: Relation, R_right: Relation, S: Bilattice) -> set:
    return {(R_left.image(P), R_right.image(Q)) for P, Q in S.pairs}


def check_lemma_identities(cfg: MoritaConfig) -> Report:
    """Identities relating a Morita witness to the essential bilattices of the two bimodules.

    ``chi_i = Map(V_i)`` and ``psi_i = Map(W_i)``; starred maps use transposes.
    Meet preservation is checked on all pairs, which suffices on finite families.
    When ``cfg.hom`` is given, the witness is also compared against the algebras
    of the slices and ``Op(theta)`` identities of the combined lattice map.
    """
    E1, E2, w = cfg.E1, cfg.E2, cfg.witness
    rep = Report("Morita lemma identities")
    S1, S2 = essential_bilattice(E1), essential_bilattice(E2)
    try:
        WV = [span_compose([w.V1, w.W1]), span_compose([w.V2, w.W2])]   # [W_i V_i]
        VW = [span_compose([w.W1, w.V1]), span_compose([w.W2, w.V2])]   # [V_i W_i]
    except GroundMismatch as exc:
        rep.add("witness chains compose", False, detail=str(exc))
        return rep
    chi = [w.V1, w.V2]
    psi = [w.W1, w.W2]
    lat_WV = [lat_of_relation(R) for R in WV]
    lat_VW = [lat_of_relation(R) for R in VW]
    for i in range(2):
        _maps_onto(rep, f"chi{i+1}(Lat[W{i+1}V{i+1}]) = Lat[V{i+1}W{i+1}]", chi[i], lat_WV[i], lat_VW[i])
        _maps_onto(rep, f"psi{i+1}(Lat[V{i+1}W{i+1}]) = Lat[W{i+1}V{i+1}]", psi[i], lat_VW[i], lat_WV[i])
        _meet_preserving(rep, f"chi{i+1} preserves meets on Lat[W{i+1}V{i+1}]", chi[i], lat_WV[i].elements)

    S1l, S1r = slices(S1)
    psi2_star = transpose(w.W2)
    chi2_star = transpose(w.V2)
    _meet_preserving(rep, "chi1 preserves meets on S1_l", w.V1, S1l.elements)
    _meet_preserving(rep, "psi2* preserves meets on S1_r", psi2_star, S1r.elements)

    img = _pairs_image(w.V1, psi2_star, S1)
    rep.add("S2 = (chi1 + psi2*)(S1)", img == set(S2.pairs),
            {"extra": sorted(img - set(S2.pairs))[:10], "missing": sorted(set(S2.pairs) - img)[:10]}
            if img != set(S2.pairs) else None)
    img = _pairs_image(w.W1, chi2_star, S2)
    rep.add("S1 = (psi1 + chi2*)(S2)", img == set(S1.pairs),
            {"extra": sorted(img - set(S1.pairs))[:10], "missing": sorted(set(S1.pairs) - img)[:10]}
            if img != set(S1.pairs) else None)

    if cfg.hom is not None:
        h = cfg.hom
        _eq_law(rep, "U1 = [W2 U2 V1] (iso)", span_compose([w.V1, E2, w.W2]), E1)
        _eq_law(rep, "U2 = [V2 U1 W1] (iso)", span_compose([w.W1, E1, w.V2]), E2)
        _eq_law(rep, "[W1 V1] = Alg(S1_l)", WV[0], alg_of_lattice(h.phi.source))
        _eq_law(rep, "[V1 W1] = Alg(S2_l)", VW[0], alg_of_lattice(h.phi.target))
        _eq_law(rep, "[W2 V2] = Alg(S1_r)*", WV[1], transpose(alg_of_lattice(h.psi.source)))
        _eq_law(rep, "[V2 W2] = Alg(S2_r)*", VW[1], transpose(alg_of_lattice(h.psi.target)))
        if h.is_bijective():
            rep.extend(check_op_theta_identities(combined_lattice_iso(h)))
    return rep


# -- onto homomorphisms -----------------------------------------------------

def check_onto_hom_laws(S1: Bilattice, S2: Bilattice, h: BilatticeHom) -> Report:
    """Relations between the witness patterns of an onto homomorphism and the two bimodules.

    ``U1 >= W2 U2 V1``, ``U2 = [V2 U1 W1]``, ``W1 V1 <= Alg(S1_l)``,
    ``[V1 W1] = Alg(S2_l)``, ``W2 V2 <= Alg(S1_r)*``, ``[V2 W2] = Alg(S2_r)*``.
    """
    rep = Report("onto homomorphism laws")
    pre = hom_check(h)
    if not pre.ok or not is_onto(h) or h.source != S1 or h.target != S2:
        rep.add("precondition: valid onto homomorphism", False, detail="laws not evaluated")
        return rep
    w = witnesses_from_hom(S1, S2, h)
    U1, U2 = m_of(S1), m_of(S2)
    S1l, S1r = slices(S1)
    S2l, S2r = slices(S2)
    _sub_law(rep, "W2 U2 V1 <= U1", span_compose([w.V1, U2, w.W2]), U1)
    _eq_law(rep, "U2 = [V2 U1 W1]", span_compose([w.W1, U1, w.V2]), U2)
    _sub_law(rep, "W1 V1 <= Alg(S1_l)", span_compose([w.V1, w.W1]), alg_of_lattice(S1l))
    _eq_law(rep, "[V1 W1] = Alg(S2_l)", span_compose([w.W1, w.V1]), alg_of_lattice(S2l))
    _sub_law(rep, "W2 V2 <= Alg(S1_r)*", span_compose([w.V2, w.W2]), transpose(alg_of_lattice(S1r)))
    _eq_law(rep, "[V2 W2] = Alg(S2_r)*", span_compose([w.W2, w.V2]), transpose(alg_of_lattice(S2r)))
    return rep


def check_nonzero_transfer_hom(h: BilatticeHom) -> Report:
    """A nonzero cell of ``m_of(target)`` yields a nonzero cell of ``m_of(source)`` through ``[W2 K V1]``.

    In finite dimensions compact, finite-rank and rank-one nonzero operators
    all exist exactly when the support is nonempty, so one cell suffices.
    """
    rep = Report("nonzero transfer")
    U1, U2 = m_of(h.source), m_of(h.target)
    cell = nonzero_witness(U2)
    if cell is None:
        rep.add("target nonzero implies source nonzero", True, detail="target support empty")
        return rep
    w = witnesses_from_hom(h.source, h.target, h)
    K = Relation.from_pairs(U2.source, U2.target, [cell])
    moved = span_compose([w.V1, K, w.W2])
    got = nonzero_witness(moved)
    rep.add("[W2 K V1] nonzero", got is not None, {"cell": cell})
    rep.add("[W2 K V1] inside source support", moved <= U1, moved.difference(U1)[:10] or None)
    rep.add("target nonzero implies source nonzero", nonzero_witness(U1) is not None,
            detail=f"{cell} -> {got}")
    return rep


# -- doubling constructions -------------------------------------------------

def _doubled(g: GroundSpace) -> GroundSpace:
    return GroundSpace(2 * g.size, f"{g.label}+{g.label}" if g.label else "")


def double_diag(S: Bilattice) -> Bilattice:
    """``{(P + P, Q + Q)}`` on the doubled grounds, closed under generation."""
    gl, gr = S.left_ground, S.right_ground
    gens = [(P | P << gl.size, Q | Q << gr.size) for P, Q in S.pairs]
    return bilattice_generate(_doubled(gl), _doubled(gr), gens)


@dataclass(frozen=True)
class Blocks:
    """2x2 block decomposition of a relation on ``(A1 + A2) -> (B1 + B2)``.

    Named by ``(target block, source block)``, like matrix entries.
    """

    upper_left: Relation    # A1 -> B1
    upper_right: Relation   # A2 -> B1
    lower_left: Relation    # A1 -> B2
    lower_right: Relation   # A2 -> B2

    def as_matrix(self):
        return [[self.upper_left, self.upper_right], [self.lower_left, self.lower_right]]


def split_blocks(R: Relation, A1: GroundSpace, A2: GroundSpace, B1: GroundSpace, B2: GroundSpace) -> Blocks:
    return Blocks(
        upper_left=_block(R, 0, A1, 0, B1),
        upper_right=_block(R, A1.size, A2, 0, B1),
        lower_left=_block(R, 0, A1, B1.size, B2),
        lower_right=_block(R, A1.size, A2, B1.size, B2),
    )


def double_graph(S: Bilattice, h: BilatticeHom) -> tuple[Bilattice, Blocks]:
    """Graph bilattice ``{(P + phi(P), Q + psi(Q))}`` and the blocks of its bimodule."""
    if h.source != S:
        raise GroundMismatch("homomorphism source differs from S")
    A1, B1 = S.left_ground, S.right_ground
    A2, B2 = h.target.left_ground, h.target.right_ground
    gens = [(P | h.phi.table[P] << A1.size, Q | h.psi.table[Q] << B1.size) for P, Q in S.pairs]
    Z2 = bilattice_generate(sum_ground(A1, A2), sum_ground(B1, B2), gens)
    return Z2, split_blocks(m_of(Z2), A1, A2, B1, B2)


def omega_patterns(S: Bilattice, h: BilatticeHom) -> tuple[Relation, Relation]:
    """``Omega1 = {T : Q T phi(P) = 0}`` on ``A2 -> B1`` and ``Omega2 = {T : psi(Q) T P = 0}`` on ``A1 -> B2``."""
    A1, B1 = S.left_ground, S.right_ground
    A2, B2 = h.target.left_ground, h.target.right_ground
    om1 = [B1.full] * A2.size
    om2 = [B2.full] * A1.size
    for P, Q in S.pairs:
        for x in iter_bits(h.phi.table[P]):
            om1[x] &= ~Q
        for x in iter_bits(P):
            om2[x] &= ~h.psi.table[Q]
    return (Relation(A2, B1, tuple(r & B1.full for r in om1)),
            Relation(A1, B2, tuple(r & B2.full for r in om2)))


def check_doubling_blocks(S: Bilattice, h: BilatticeHom) -> Report:
    """Block identities of ``double_diag(S)`` and ``double_graph(S, h)``.

    The diagonal doubling repeats ``m_of(S)`` in all four blocks. The graph
    doubling has ``m_of(S)`` top left and the ``Omega`` patterns off the
    diagonal; its bottom-right block is ``m_of(h.target)`` when ``h`` is onto.
    """
    rep = Report("doubling blocks")
    U = m_of(S)
    D = double_diag(S)
    blocks = split_blocks(m_of(D), S.left_ground, S.left_ground, S.right_ground, S.right_ground)
    for name in ("upper_left", "upper_right", "lower_left", "lower_right"):
        _eq_law(rep, f"double_diag {name} = m_of(S)", getattr(blocks, name), U)
    _, gb = double_graph(S, h)
    om1, om2 = omega_patterns(S, h)
    _eq_law(rep, "double_graph upper_left = m_of(S)", gb.upper_left, U)
    _eq_law(rep, "double_graph upper_right = Omega1", gb.upper_right, om1)
    _eq_law(rep, "double_graph lower_left = Omega2", gb.lower_left, om2)
    if is_onto(h):
        _eq_law(rep, "double_graph lower_right = m_of(target)", gb.lower_right, m_of(h.target))
    return rep
