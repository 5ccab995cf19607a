# Haar averages over U(N) tilted by product weights.
#
# omega_2 turns unitary averages into symplectic ones, the orthogonal weight
# gives orthogonal ones, and omega_3 reproduces the cubic-family limit.

from ffmoments import Partition
from ffmoments import rmt
from ffmoments.partitions import limit_moment

L = Partition.from_parts

est = rmt.mc_weighted_integral(5, L((2,)), conj_mu=L((2,)), samples=200_000, seed=1)
print(f"int |Tr U^2|^2 dU = {est.value.real:.4f} +- {est.stderr:.4f}   (z_lambda = {rmt.z_lambda(L((2,)))})")

for lam in (L((2,)), L((1, 1)), L((1, 1, 2))):
    est = rmt.mc_weighted_integral(6, lam, rmt.WeightSpec.omega(2), samples=200_000, seed=2)
    print(f"omega_2  {str(lam):<8} {est.value.real:8.4f} +- {est.stderr:.4f}   exact {rmt.symplectic_moment(lam)}")

for lam in (L((2,)), L((1, 1)), L((4,))):
    est = rmt.mc_weighted_integral(5, lam, rmt.WeightSpec.orthogonal(), samples=200_000, seed=3)
    print(f"w_O      {str(lam):<8} {est.value.real:8.4f} +- {est.stderr:.4f}   exact {rmt.orthogonal_moment(lam)}")

est = rmt.mc_weighted_integral(5, L((3,)), rmt.WeightSpec.omega(3), samples=200_000, seed=4)
print(f"omega_3  (3)      {est.value.real:8.4f} +- {est.stderr:.4f}   limit {limit_moment(L((3,)), 3)}")

rep = rmt.weight_reconstruction_check(4, 3)
print("series truncation error at radius 0.5:", {d: f"{v:.1e}" for d, v in rep.max_deviation.items()})
