"""The essential bilattice of a support relation and the relation it presents."""
from bilattice_morita import Relation, bil_of, essential_bilattice, m_of

E = Relation.from_pairs(2, 2, [(0, 0), (1, 0), (1, 1)])
S = essential_bilattice(E)
print(f"E = {E.pairs}")
print(f"essential bilattice: {len(S)} pairs")
for P, Q in S.proj_pairs():
    print(f"  ({sorted(P.members)}, {sorted(Q.members)})")
print("m_of(essential) = E:", m_of(S) == E)
print(f"maximal bilattice Bil(E): {len(bil_of(E))} pairs, also presents E: {m_of(bil_of(E)) == E}")
