# Family averages of P_lambda(Theta_G) over cube-free G of degree 5.
#
# The exact average splits into a main term (tuples of primes whose product
# is a cube) and an error term (genuine character sums).  The error term
# shrinks as q grows while the main term approaches the combinatorial limit.

import warnings

from ffmoments import Partition, make_context
from ffmoments.moments import empirical_moment, split_moment
from ffmoments.partitions import limit_moment

warnings.simplefilter("ignore", RuntimeWarning)

lam = Partition.from_parts((3,))
print("limit value", limit_moment(lam, 3))
print(f"{'q':>3} {'empirical':>10} {'main':>10} {'error':>10}")
for q in (7, 13):
    ctx = make_context(q, 3)
    emp = empirical_moment(ctx, 5, lam)
    mt, et = split_moment(ctx, 5, lam)
    print(f"{q:>3} {emp.value.real:>10.5f} {mt.value.real:>10.5f} {et.value.real:>10.5f}")

# q = 31 is out of reach for enumeration (28 million moduli); the split is
# computed from generating functions and its sum is the family average.
mt, et = split_moment(make_context(31, 3), 5, lam)
print(f" 31 {mt.value.real + et.value.real:>10.5f} {mt.value.real:>10.5f} {et.value.real:>10.5f}  ({mt.params['route']})")
