"""
PDS functions, rank products and chains
=======================================

A few of the smaller facts behind the collapse argument, checked
exhaustively on small ground sets.
"""

from rainbowlab import (
    SetFunction,
    UniformMatroid,
    check_pds,
    check_product_submodular,
    close_family,
    extract_chain,
    interior_pds,
    span_dimension,
)

# 2n^2 - |A|^2 is strictly positive, decreasing and submodular
c = interior_pds(4)
print("\n".join(check_pds(c).lines()))

# rescaled so its value on the whole ground set is 1
print("scaled c(V) =", interior_pds(4, 1)[0b1111])

# the max of element weights is submodular but grows with A
print("\n".join(check_pds(SetFunction.max_of([1, 2])).lines()))

# a decreasing submodular function times a matroid rank stays submodular
print("interior * rank of U(4,2):", bool(check_product_submodular(c, UniformMatroid(4, 2))))

# a union/intersection-closed family holds a chain as long as its span dimension
fam = close_family([0b0011, 0b0110, 0b1100])
chain = extract_chain(fam)
print("family size", len(fam), "span", span_dimension(fam), "chain", [bin(s) for s in chain.sets])
