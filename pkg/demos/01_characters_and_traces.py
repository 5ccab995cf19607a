# Cubic characters over F_7[T] and their Frobenius traces.
#
# A modulus G with no cube factor defines chi_G; its L-function is a polynomial
# whose inverse roots, scaled by sqrt(q), sit on the unit circle.

import numpy as np

from ffmoments import Poly, make_context
from ffmoments import characters as ch
from ffmoments import polyring as pr

ctx = make_context(7, 3)
T = Poly.T(7)
G = T**4 + 1
print("modulus", G, "factors", pr.factor(G).factors)

chi = ch.Character(ctx, G)
print("chi_G(T + 3) =", np.round(chi(T + 3), 6))

lp = ch.l_poly(chi)
print("L(u) coefficients:", np.round(lp, 4))
rep = ch.l_poly_report(chi)
print("degree", rep.degree, "root moduli", np.round(rep.root_moduli, 6), "vs 7^-1/2 =", round(7**-0.5, 6))

# Two ways to the traces: prime sums and Newton's identities on L(u)
direct = [ch.trace_frobenius(chi, n) for n in range(1, 5)]
newton = ch.traces_via_newton(lp, 4, 7)
for n, (a, b) in enumerate(zip(direct, newton), start=1):
    print(f"Tr(Theta^{n}) = {a:.6f}   newton {b:.6f}")

# When 3 | deg G the character is even and L(u) picks up the zero u = 1
P = pr.irreducibles(ctx, 3)[0]
print("even case", P, ch.l_poly_report(ch.Character(ctx, P)).root_moduli)
