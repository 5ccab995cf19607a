# The q -> infinity limit as a sum over decompositions of lambda into scaled
# partitions of r, and the same number from admissible set partitions.

from ffmoments import Partition
from ffmoments import partitions as pt
from ffmoments.rmt import symplectic_moment

lam = Partition.from_parts((1, 2, 2, 2, 2))
for a in pt.decompositions(lam, 3):
    print(a, "count", pt.count_type(lam, a))
print("limit", pt.limit_moment(lam, 3), "=", pt.limit_moment_subsets(lam, 3))

print("\nset partitions of type {a[1,(1,2)]=1, a[2,(1,1,1)]=1}:")
for blocks in pt.admissible_set_partitions(lam, 3):
    if len(blocks) == 2:
        print("  ", blocks)

# r = 2 reproduces the symplectic moments
print("\nlambda   limit(r=2)  symplectic")
for lam in pt.partitions_up_to(6, 3):
    if lam.size:
        print(f"{str(lam):<9}{str(pt.limit_moment(lam, 2)):>10}{symplectic_moment(lam):>12}")
