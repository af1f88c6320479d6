"""Pull a relation back along point maps and check the induced homomorphism."""
from bilattice_morita import check_inverse_image, essential_bilattice, hom_from_point_maps, pullback
from bilattice_morita.harness.instances import load_golden

inst = load_golden("collapse")
theta, rho, E1 = inst.point_maps["theta"], inst.point_maps["rho"], inst.relations["E1"]
E = pullback(theta, rho, E1)
print(f"E1 = {E1.pairs}; theta = {list(theta.table)}; rho = {list(rho.table)}")
print(f"pullback = {E.pairs}")
h = hom_from_point_maps(theta, rho, essential_bilattice(E1))
print("induced map bijective:", h.is_bijective())
print(check_inverse_image(theta, rho, E1).render())
