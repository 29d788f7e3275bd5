"""
Pauli classes and complementarity
=================================

"""

from lonpauli import complementary_set, pauli_classes
from lonpauli.pauli import complementarity_grid, is_mutually_unbiased

# mode shifts split each sector into orbits; their sizes divide M
for N in (1, 2, 3, 4):
    print(N, "photons:", [(c.name, c.dim) for c in pauli_classes(4, N)])

# Lambda_j / Lambda_l complementarity per class, from the gcd rule
pairs, rows = complementarity_grid(4, 2)
print("pairs:", pairs)
for cls, row in rows:
    print(cls.name, ["y" if row[p] else "n" for p in pairs])

# the rule agrees with explicit eigenbasis overlaps
cls = rows[2][0]
print(cls.name, "L0/L1 unbiased:", is_mutually_unbiased(cls, 0, 1))

# largest operator sets complementary in every class of a sector
for M, N in [(5, 2), (4, 2), (4, 3), (6, 5)]:
    print((M, N), complementary_set(M, N))
