"""Generate a CSL, build its preorder algebra and recover the lattice from it."""
from bilattice_morita import alg_of_lattice, csl_generate, join_irreducibles, lat_of_relation

L = csl_generate(4, [{0, 1}, {1, 2}, {2, 3}])
print(f"CSL on 4 atoms generated by {{0,1}}, {{1,2}}, {{2,3}}: {len(L)} elements")
for e in L.elements:
    print("  ", sorted(i for i in range(4) if e >> i & 1))

A = alg_of_lattice(L)
print(f"\nAlg(L) has {len(A)} cells: {A.pairs}")
print("Lat(Alg(L)) = L:", lat_of_relation(A) == L)
print("join-irreducibles:", join_irreducibles(L))
