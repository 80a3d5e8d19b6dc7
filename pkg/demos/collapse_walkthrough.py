"""
Collapsing the complex of small fractional matchings
====================================================

For the stars of K_{2,2} and k = 2 the complex is every edge set whose
fractional matching number is below 2.  The engine removes one interval
at a time: perturb b until the duals are unique, pick an inclusion-minimal
face of largest value, check it sits in a single facet, remove every face
above it, then lower the weights outside it.  The certificate is replayed
by a verifier that only sees the face list.
"""

from rainbowlab import ComplexSpec, IntersectionSystem, Hypergraph, star_matroids
from rainbowlab.collapse import enumerate_faces_independent, run_collapse, verify_certificate

edges = [(0, 0), (0, 1), (1, 0), (1, 1)]
labels = ["u0w0", "u0w1", "u1w0", "u1w1"]
hg = Hypergraph(edges)
spec = ComplexSpec(IntersectionSystem(star_matroids(hg)), None, 2)


def show(mask):
    return "{" + ", ".join(labels[e] for e in range(4) if mask >> e & 1) + "}"


faces = enumerate_faces_independent(spec, hg)
print("faces:", ", ".join(show(F) for F in faces))

cert = run_collapse(spec)
for i, step in enumerate(cert.steps):
    print(f"step {i}: collapsor {show(step.collapsor):<14} facet {show(step.facet):<14} kbar ~ {float(step.kbar):.4f}")

print("dimension bound:", cert.d)
print("verifier:", verify_certificate(faces, cert))
