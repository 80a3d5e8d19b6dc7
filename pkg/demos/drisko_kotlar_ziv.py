"""
Rainbow matchings from 2k-1 matchings of size k
===============================================

In a bipartite graph, 2k-1 matchings of size k always have a rainbow
matching of size k, and 2k-2 are not enough.  The catalog instance for each
k uses the 2k-cycle: k copies of one perfect matching and k-1 of the other.
"""

from rainbowlab import canonical_instances, find_integral_rainbow, kz_rainbow

cat = canonical_instances()

for k in (2, 3):
    inst = cat[f"drisko-k{k}"]
    labels = inst.ground.labels
    m1, m2 = inst.matroids
    res = kz_rainbow(inst.sets, m1, m2)
    print(f"k={k}: rainbow matching", [labels[e] for e in res.elements],
          "choice", [(j, labels[e]) for j, e in res.choice])
    # drop one matching: the extremal family of 2k-2 has none
    print(f"      with {2 * k - 2} matchings:", find_integral_rainbow(inst.hypergraph, inst.sets[1:], k))

# the same rounding works for any two matroids, not only bipartite graphs
for name in ("kz-k2", "kz-k3"):
    inst = cat[name]
    res = kz_rainbow(inst.sets, *inst.matroids)
    print(f"{name}: rainbow common independent set {res.elements}")
