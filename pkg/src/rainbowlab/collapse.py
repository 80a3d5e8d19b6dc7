"""d-collapse sequences for the complexes ``X_{a,b,k} = {W : nu*_{a,b}(W) < k}``.

The engine keeps the complex implicitly as ``(a, b, threshold)`` and
re-derives faces by LP.  One step:

1. perturb ``b`` until every face has a unique optimal dual (face set and
   ``b_min`` unchanged),
2. take ``kbar``, the largest ``nu*`` over faces, and an inclusion-minimal
   face ``W`` attaining it (smallest mask on ties),
3. check that ``W`` lies in a unique facet ``W | W+``,
4. record the step and drop every face containing ``W``,
5. lower ``a`` by ``epsilon`` off ``W`` so that the smaller complex is
   ``X_{a',b,kbar}``, halving ``epsilon`` until that is verified.

The verifier works on an explicit face set and knows nothing about LPs.
"""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Iterable, Sequence

from .errors import InputError, InvariantError
from .lp import rational
from .matroids import Hypergraph, elements_of, popcount
from .polytopes import (
    IntersectionSystem,
    _positive_weights,
    hypergraph_nu_star,
    is_dual_unique,
    nu_star,
    nu_star_value,
    tau_star,
)
from .setfunctions import perturb_tuple

log = logging.getLogger(__name__)

MAX_FACES_N = 14
MAX_HALVINGS = 64
MAX_FACET_RETRIES = 8


class GenericityError(InvariantError):
    """Perturbation failed to make the dual optima unique."""


@dataclass(frozen=True)
class ComplexSpec:
    sys: IntersectionSystem
    a: tuple[Fraction, ...]
    k: Fraction

    def __init__(self, sys: IntersectionSystem, a=None, k=1):
        object.__setattr__(self, "sys", sys)
        object.__setattr__(self, "a", _positive_weights(a, sys.n))
        kk = rational(k)
        if kk <= 0:
            raise InputError("the threshold k must be positive")
        object.__setattr__(self, "k", kk)

    @property
    def n(self) -> int:
        return self.sys.n

    @property
    def a_min(self) -> Fraction:
        return min(self.a)

    def replace(self, sys=None, a=None, k=None) -> "ComplexSpec":
        return ComplexSpec(sys or self.sys, a or self.a, self.k if k is None else k)

    def nu(self, W: int) -> Fraction:
        return nu_star_value(self.sys, W, self.a)

    def dimension_bound(self, kbar: Fraction) -> int:
        """``r * floor(kbar / (a_min * b_min))``."""
        return self.sys.r * math.floor(kbar / (self.a_min * self.sys.b.b_min))


@dataclass(frozen=True)
class CollapseStep:
    collapsor: int
    facet: int
    a_snapshot: tuple[Fraction, ...]
    kbar: Fraction


@dataclass(frozen=True)
class CollapseCertificate:
    spec: ComplexSpec
    d: int
    steps: tuple[CollapseStep, ...]
    complete: bool = True
    perturbations: int = field(default=0, compare=False)

    @property
    def max_collapsor(self) -> int:
        return max((popcount(s.collapsor) for s in self.steps), default=0)


def _dyadic_below(x: Fraction) -> Fraction:
    """Largest power of two not exceeding ``x`` (keeps certificate rationals short)."""
    e = Fraction(1)
    while e > x:
        e /= 2
    while e * 2 <= x:
        e *= 2
    return e


def _check_cap(n: int) -> None:
    if n > MAX_FACES_N:
        raise InputError(f"face enumeration is exhaustive and capped at n={MAX_FACES_N}")


def _downward_sweep(n: int, is_face) -> list[int]:
    faces: set[int] = set()
    for W in sorted(range(1 << n), key=lambda m: (popcount(m), m)):
        if any(W & (1 << v) and W ^ (1 << v) not in faces for v in range(n)):
            continue
        if is_face(W):
            faces.add(W)
    return sorted(faces)


def enumerate_faces(spec: ComplexSpec) -> list[int]:
    """All ``W`` with ``nu*(W) < k``, sorted by mask.

    ``nu*`` is monotone, so a set is only solved for once all of its
    co-atoms are known faces.
    """
    _check_cap(spec.n)
    return _downward_sweep(spec.n, lambda W: spec.nu(W) < spec.k)


def enumerate_faces_independent(spec: ComplexSpec, hypergraph: Hypergraph | None = None) -> list[int]:
    """The same face set computed by a different program, for the verifier.

    With a hypergraph, unit ``a`` and unit ``b`` the edge-vertex fractional
    matching program is used; otherwise the unmerged dual covering program.
    Every set is solved (no monotone pruning), and downward closure is
    checked rather than assumed.
    """
    _check_cap(spec.n)
    unit = all(x == 1 for x in spec.a) and all(x == 1 for f in spec.sys.b for x in f.table)
    if hypergraph is not None and unit:
        value = lambda W: hypergraph_nu_star(hypergraph, W)  # noqa: E731
    else:
        value = lambda W: tau_star(spec.sys, W, spec.a)[0]  # noqa: E731
    faces = {W for W in range(1 << spec.n) if value(W) < spec.k}
    for W in faces:
        for v in elements_of(W):
            if W ^ (1 << v) not in faces:
                raise InvariantError(f"complex not downward closed at {W:#x}")
    return sorted(faces)


def compute_kbar(spec: ComplexSpec, faces: Sequence[int] | None = None) -> Fraction | None:
    """Largest ``nu*`` over the faces, or None when the complex is empty."""
    if faces is None:
        faces = enumerate_faces(spec)
    if not faces:
        return None
    kbar = max(spec.nu(W) for W in faces)
    if kbar >= spec.k:
        raise InvariantError("kbar reached the threshold")
    return kbar


def is_generic(spec: ComplexSpec, faces: Iterable[int]) -> bool:
    return all(is_dual_unique(spec.sys, W, spec.a) for W in faces)


def ensure_genericity(spec: ComplexSpec, faces: Sequence[int] | None = None, seed: int = 0) -> ComplexSpec:
    """Return ``spec`` with ``b`` perturbed so every face has a unique optimal dual.

    The perturbation keeps ``b^i(V)``; the face set is recomputed and must
    be unchanged.  ``epsilon`` starts at ``(k - kbar)/4`` and halves on
    every failed attempt.
    """
    if faces is None:
        faces = enumerate_faces(spec)
    faces = list(faces)
    if is_generic(spec, faces):
        return spec
    kbar = compute_kbar(spec, faces)
    eps = _dyadic_below((spec.k - kbar) / 4) if kbar is not None else Fraction(1, 4)
    for attempt in range(MAX_HALVINGS):
        b2 = perturb_tuple(spec.sys.b, eps, seed * 1000 + attempt, sustain="min")
        cand = spec.replace(sys=spec.sys.with_b(b2))
        if b2.b_min != spec.sys.b.b_min:
            raise InvariantError("perturbation moved b_min")
        if enumerate_faces(cand) == faces and is_generic(cand, faces):
            log.debug("genericity reached after %d attempts (epsilon=%s)", attempt + 1, eps)
            return cand
        eps /= 2
    raise GenericityError(f"no generic perturbation found after {MAX_HALVINGS} halvings")


def pick_collapsor(spec: ComplexSpec, faces: Sequence[int], kbar: Fraction | None = None) -> int:
    """Inclusion-minimal face attaining ``kbar``; smallest mask among the minimal ones."""
    if kbar is None:
        kbar = compute_kbar(spec, faces)
    for W in faces:
        if spec.nu(W) != kbar:
            continue
        if all(spec.nu(W ^ (1 << v)) < kbar for v in elements_of(W)):
            return W
    raise InvariantError("no face attains kbar")


def unique_facet(spec: ComplexSpec, W: int, faces: Sequence[int], kbar: Fraction | None = None) -> int:
    """The facet ``W | W+`` with ``W+ = {v : W + v is a face}``, checked to be the only one above ``W``.

    When ``kbar`` is given, the optimal dual of ``tau*(W)`` must also cover
    every element of the facet at cost ``kbar``.
    """
    face_set = set(faces)
    plus = 0
    for v in range(spec.n):
        if not W >> v & 1 and W | (1 << v) in face_set:
            plus |= 1 << v
    facet = W | plus
    if facet not in face_set:
        raise GenericityError(f"W|W+ = {facet:#x} is not a face")
    for F in faces:
        if F & W == W and F & ~facet:
            raise GenericityError(f"face {F:#x} contains {W:#x} but leaves the facet {facet:#x}")
    if kbar is not None and W:
        value, h = tau_star(spec.sys, W, spec.a)
        if value != kbar or any(h.coverage(v) < spec.a[v] for v in elements_of(facet)):
            raise GenericityError("the optimal dual of W does not certify the facet")
    return facet


def reweight(spec: ComplexSpec, W: int, kbar: Fraction, faces: Sequence[int]) -> ComplexSpec:
    """Lower ``a`` by ``epsilon`` off ``W`` and move the threshold to ``kbar``.

    Accepted once the new complex is exactly the old one minus every face
    containing ``W`` and the dimension bound has not grown.
    """
    expected = [F for F in faces if F & W != W]
    outside = [v for v in range(spec.n) if not W >> v & 1]
    if not outside:
        cand = spec.replace(k=kbar)
        if enumerate_faces(cand) != expected:
            raise InvariantError("reweighting with W = V changed the complex unexpectedly")
        return cand
    eps = _dyadic_below(min((spec.k - kbar) / 4, spec.a_min / 2))
    bound = spec.dimension_bound(kbar)
    for _ in range(MAX_HALVINGS):
        a2 = tuple(x if W >> v & 1 else x - eps for v, x in enumerate(spec.a))
        cand = ComplexSpec(spec.sys, a2, kbar)
        if cand.dimension_bound(kbar) <= bound and enumerate_faces(cand) == expected:
            return cand
        eps /= 2
    raise InvariantError(f"no valid reweighting epsilon after {MAX_HALVINGS} halvings")


def run_collapse(spec: ComplexSpec, seed: int = 0) -> CollapseCertificate:
    """Collapse ``X_{a,b,k}`` to the empty complex, recording every step."""
    faces = enumerate_faces(spec)
    steps: list[CollapseStep] = []
    if not faces:
        return CollapseCertificate(spec, 0, ())
    state = spec
    d = None
    perturbations = 0
    threshold = spec.k
    while faces:
        for attempt in range(MAX_FACET_RETRIES):
            generic = ensure_genericity(state, faces, seed=seed + 7919 * len(steps) + attempt)
            if generic is not state:
                perturbations += 1
            kbar = compute_kbar(generic, faces)
            W = pick_collapsor(generic, faces, kbar)
            try:
                facet = unique_facet(generic, W, faces, kbar)
            except GenericityError as exc:
                log.info("step %d: %s; perturbing again", len(steps), exc)
                # force a fresh perturbation on the next attempt
                state = generic.replace(sys=generic.sys.with_b(
                    perturb_tuple(generic.sys.b, _dyadic_below((threshold - kbar) / 8), seed + attempt + 1,
                                 sustain="min")))
                continue
            break
        else:
            raise GenericityError(f"step {len(steps)}: facet of the collapsor never became unique")
        state = generic
        if not kbar < threshold:
            raise InvariantError("thresholds must strictly decrease")
        bound = state.dimension_bound(kbar)
        if d is None:
            d = bound
        if popcount(W) > bound:
            raise InvariantError(f"collapsor {W:#x} exceeds the bound {bound}")
        steps.append(CollapseStep(W, facet, state.a, kbar))
        remaining = [F for F in faces if F & W != W]
        if len(remaining) >= len(faces):
            raise InvariantError("collapse step removed no face")
        if remaining:
            state = reweight(state, W, kbar, faces)
        faces = remaining
        threshold = kbar
    return CollapseCertificate(spec, d, tuple(steps), True, perturbations)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    bad_step: int | None = None
    reason: str = ""

    def __bool__(self):
        return self.ok


def _maximal_above(current: set[int], sigma: int) -> list[int]:
    above = [F for F in current if F & sigma == sigma]
    return sorted(F for F in above if not any(G != F and G & F == F for G in above))


def verify_certificate(faces: Iterable[int], cert: CollapseCertificate, d: int | None = None) -> Verdict:
    """Replay ``cert`` against an explicit face set.

    Each collapsor must be a current face of size at most ``d`` lying in
    exactly one maximal face, which must equal the recorded facet.  When
    the certificate carries its spec, each step is also held to
    ``r * floor(kbar / (a_min * b_min))`` at that step.  Accepts iff the
    complex ends empty.
    """
    current = set(faces)
    if d is None:
        d = cert.d
    r = cert.spec.sys.r
    b_min = cert.spec.sys.b.b_min
    for i, step in enumerate(cert.steps):
        sigma = step.collapsor
        if sigma not in current:
            return Verdict(False, i, f"collapsor {sigma:#x} is not a current face")
        if popcount(sigma) > d:
            return Verdict(False, i, f"collapsor has {popcount(sigma)} elements, more than d={d}")
        local = r * math.floor(step.kbar / (min(step.a_snapshot) * b_min))
        if popcount(sigma) > local:
            return Verdict(False, i, f"collapsor exceeds the step bound {local}")
        tops = _maximal_above(current, sigma)
        if len(tops) != 1:
            return Verdict(False, i, f"collapsor lies in {len(tops)} maximal faces")
        if tops[0] != step.facet:
            return Verdict(False, i, f"recorded facet {step.facet:#x} but the unique facet is {tops[0]:#x}")
        current = {F for F in current if F & sigma != sigma}
    if current:
        return Verdict(False, len(cert.steps), f"{len(current)} faces remain after the last step")
    return Verdict(True)


def greedy_collapsibility_probe(faces: Iterable[int], d: int) -> bool:
    """Greedy search for a d-collapse sequence.

    Always takes the largest admissible collapsor (smallest mask on ties).
    True is a proof of d-collapsibility; False is inconclusive.
    """
    current = set(faces)
    if len(current) > 1 << 12:
        raise InputError("probe is limited to 4096 faces")
    while current:
        for sigma in sorted(current, key=lambda m: (-popcount(m), m)):
            if popcount(sigma) <= d and len(_maximal_above(current, sigma)) == 1:
                current = {F for F in current if F & sigma != sigma}
                break
        else:
            log.info("greedy probe stuck with %d faces at d=%d (inconclusive)", len(current), d)
            return False
    return True


CERT_FORMAT = "rainbowlab-collapse-certificate/1"


def certificate_to_dict(cert: CollapseCertificate, hypergraph: Hypergraph | None = None) -> dict:
    from .instances import Instance, fmt, instance_to_dict

    sys = cert.spec.sys
    inst = Instance(sys.ground, list(sys.matroids), sys.b, cert.spec.a, cert.spec.k, hypergraph=hypergraph)
    return {
        "format": CERT_FORMAT,
        "spec": instance_to_dict(inst),
        "dimension_bound": cert.d,
        "steps": [
            {
                "collapsor": elements_of(s.collapsor),
                "facet": elements_of(s.facet),
                "kbar": fmt(s.kbar),
                "a": [fmt(x) for x in s.a_snapshot],
            }
            for s in cert.steps
        ],
        "final": "empty" if cert.complete else "incomplete",
    }


def certificate_to_text(cert: CollapseCertificate, hypergraph: Hypergraph | None = None) -> str:
    from .instances import to_text

    return to_text(certificate_to_dict(cert, hypergraph))


def certificate_from_dict(data: dict) -> tuple[CollapseCertificate, Hypergraph | None]:
    from .instances import parse_instance, parse_subset

    if not isinstance(data, dict) or data.get("format") != CERT_FORMAT:
        raise InputError(f"not a collapse certificate (expected format {CERT_FORMAT!r})")
    try:
        inst = parse_instance(data["spec"])
        spec = inst.complex_spec()
        steps = []
        for s in data["steps"]:
            a = tuple(rational(x) for x in s["a"])
            if len(a) != spec.n:
                raise InputError("a step's objective snapshot has the wrong length")
            steps.append(CollapseStep(parse_subset(s["collapsor"], inst.ground),
                                      parse_subset(s["facet"], inst.ground), a, rational(s["kbar"])))
        cert = CollapseCertificate(spec, int(data["dimension_bound"]), tuple(steps), data["final"] == "empty")
    except (KeyError, TypeError) as exc:
        raise InputError(f"malformed certificate: {exc!r}") from None
    return cert, inst.hypergraph


def certificate_digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def write_certificate(cert: CollapseCertificate, directory, hypergraph: Hypergraph | None = None) -> Path:
    """Write the certificate under a name derived from its content digest."""
    text = certificate_to_text(cert, hypergraph)
    path = Path(directory) / f"certificate-{certificate_digest(text)[:16]}.json"
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write certificate to {path.parent}: {exc.strerror}") from None
    return path
