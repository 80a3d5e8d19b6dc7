"""
Fractional versus integral rainbow matchings in the 2x2x2 cube
==============================================================

The complete 3-partite hypergraph with two vertices per side has eight
edges and four perfect matchings of size 2.  No two edges taken from
different matchings are disjoint, so there is no rainbow matching of size
2.  A rainbow *fractional* matching of size 2 does exist.
"""

from rainbowlab import canonical_instances, find_integral_rainbow, find_rainbow, nu_star

cube = canonical_instances()["cube-2x2x2"]
hg = cube.hypergraph
names = cube.ground.labels

for j, m in enumerate(cube.sets):
    print(f"matching {j}:", [names[e] for e in range(8) if m >> e & 1])

# exhaustive search over all partial choice functions
print("integral rainbow matching of size 2:", find_integral_rainbow(hg, cube.sets, 2))

# the fractional search works on the characteristic vectors
res = find_rainbow(cube.rainbow_instance())
print("rainbow support R:", [names[e] for e in res.elements])
print("choice (matching -> edge):", [(j, names[e]) for j, e in res.choice])
print("weights on R:", {names[e]: str(res.f[e]) for e in res.elements})
print("nu*(R) =", nu_star(cube.system(), res.R).value)
