"""Decide Morita equivalence of two supports and check the witnesses that come back."""
from bilattice_morita import Relation, decide_morita, verify_morita
from bilattice_morita.harness.instances import load_golden


def atoms(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


E1 = load_golden("diag2").relations["E"]
E2 = load_golden("a3").relations["E"]
h, w = decide_morita(E1, E2)
print(f"E1 = {E1.pairs}\nE2 = {E2.pairs}")
print("left-slice map:", ", ".join(f"{atoms(k)} -> {atoms(v)}" for k, v in h.phi.table.items()))
for name in ("V1", "V2", "W1", "W2"):
    print(f"  {name} = {getattr(w, name).pairs}")
print(verify_morita(E1, E2, w).render())

print("\ndiag on 2 atoms vs diag on 3 atoms:",
      "equivalent" if decide_morita(Relation.diagonal(2), Relation.diagonal(3)) else "not equivalent")
