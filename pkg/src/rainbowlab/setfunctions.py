"""Rational set functions on ``2^V``: PDS checks, interior points, perturbation.

PDS stands for positive, decreasing (under inclusion) and submodular.
Set functions are dense tables indexed by subset mask so they can be
hashed, compared and fed to the polytope code without re-evaluation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Callable, Sequence

import numpy as np

from .errors import InputError
from .lp import rational
from .matroids import GroundSet, Matroid, check_rank_axioms, popcount

MAX_PDS_CHECK = 14
MAX_PAIRWISE = 10


class SetFunction:
    """A complete table ``mask -> Fraction`` over the subsets of ``{0..n-1}``."""

    __slots__ = ("n", "table", "_hash")

    def __init__(self, n: int, table: Sequence):
        GroundSet(n)
        if len(table) != 1 << n:
            raise InputError(f"set function on n={n} needs {1 << n} values, got {len(table)}")
        self.n = n
        self.table = tuple(rational(x) for x in table)
        self._hash = None

    @classmethod
    def from_callable(cls, n: int, fn: Callable[[int], object]) -> "SetFunction":
        return cls(n, [fn(mask) for mask in range(1 << n)])

    @classmethod
    def constant(cls, n: int, value=1) -> "SetFunction":
        v = rational(value)
        return cls(n, [v] * (1 << n))

    @classmethod
    def ones(cls, n: int) -> "SetFunction":
        return cls.constant(n, 1)

    @classmethod
    def max_of(cls, weights: Sequence) -> "SetFunction":
        """``A -> max{w_v : v in A}``, zero on the empty set."""
        w = [rational(x) for x in weights]
        n = len(w)
        return cls.from_callable(n, lambda m: max((w[v] for v in range(n) if m >> v & 1), default=Fraction(0)))

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def __call__(self, mask: int) -> Fraction:
        return self.table[mask]

    def __getitem__(self, mask: int) -> Fraction:
        return self.table[mask]

    def __mul__(self, other):
        if isinstance(other, SetFunction):
            return SetFunction(self.n, [x * y for x, y in zip(self.table, other.table)])
        s = rational(other)
        return SetFunction(self.n, [x * s for x in self.table])

    __rmul__ = __mul__

    def __add__(self, other: "SetFunction") -> "SetFunction":
        return SetFunction(self.n, [x + y for x, y in zip(self.table, other.table)])

    def __eq__(self, other):
        return isinstance(other, SetFunction) and self.n == other.n and self.table == other.table

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.table))
        return self._hash

    def __repr__(self):
        head = ", ".join(str(x) for x in self.table[:8])
        more = ", ..." if len(self.table) > 8 else ""
        return f"SetFunction(n={self.n}, [{head}{more}])"

    def sup_distance(self, other: "SetFunction") -> Fraction:
        return max(abs(x - y) for x, y in zip(self.table, other.table))


def interior_pds(ground: GroundSet | int, target=None) -> SetFunction:
    """The strictly PDS function ``A -> 2n^2 - |A|^2``, rescaled so ``c(V) = target``.

    Without ``target`` the unscaled function is returned.
    """
    n = ground.size if isinstance(ground, GroundSet) else int(ground)
    base = [Fraction(2 * n * n - popcount(m) ** 2) for m in range(1 << n)]
    if target is None:
        return SetFunction(n, base)
    t = rational(target)
    if t <= 0:
        raise InputError(f"interior_pds target must be positive, got {t}")
    scale = t / (n * n)
    return SetFunction(n, [scale * x for x in base])


def submodularity_defect(c: SetFunction, a: int, b: int) -> Fraction:
    return c[a] + c[b] - c[a | b] - c[a & b]


@dataclass(frozen=True)
class PDSReport:
    positive: bool
    decreasing: bool
    submodular: bool
    strictly_positive: bool
    strictly_decreasing: bool
    strictly_submodular: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def is_pds(self) -> bool:
        return self.positive and self.decreasing and self.submodular

    @property
    def is_strict(self) -> bool:
        return self.strictly_positive and self.strictly_decreasing and self.strictly_submodular

    def lines(self) -> list[str]:
        out = []
        for name in ("positive", "decreasing", "submodular",
                     "strictly_positive", "strictly_decreasing", "strictly_submodular"):
            flag = getattr(self, name)
            extra = "" if flag else f" witness={list(self.witnesses.get(name, ()))}"
            out.append(f"{name}: {'yes' if flag else 'no'}{extra}")
        return out


def check_pds(c: SetFunction) -> PDSReport:
    """Exact PDS report with a witness for every failed flag.

    Decreasing is checked on covering pairs ``A, A+v`` and submodularity on
    local squares ``A+u, A+v``; both are equivalent to the pairwise
    definitions.  Strict submodularity is only demanded of incomparable
    pairs, since ``A`` and ``B`` with ``A <= B`` have zero defect for every
    function.  A defect over an incomparable pair is a sum of at least one
    local-square defect, so the local strict check is also equivalent.
    """
    n = c.n
    if n > MAX_PDS_CHECK:
        raise InputError(f"PDS check is exhaustive and capped at n={MAX_PDS_CHECK}")
    t = c.table
    w: dict = {}

    def fail(name, *masks):
        w.setdefault(name, masks)

    for m in range(1 << n):
        if t[m] < 0:
            fail("positive", m)
        if t[m] <= 0:
            fail("strictly_positive", m)
    for m in range(1 << n):
        for v in range(n):
            bit = 1 << v
            if m & bit:
                continue
            gap = t[m] - t[m | bit]
            if gap < 0:
                fail("decreasing", m, m | bit)
            if gap <= 0:
                fail("strictly_decreasing", m, m | bit)
    for m in range(1 << n):
        for u in range(n):
            bu = 1 << u
            if m & bu:
                continue
            for v in range(u + 1, n):
                bv = 1 << v
                if m & bv:
                    continue
                defect = t[m | bu] + t[m | bv] - t[m | bu | bv] - t[m]
                if defect < 0:
                    fail("submodular", m | bu, m | bv)
                if defect <= 0:
                    fail("strictly_submodular", m | bu, m | bv)
    names = ("positive", "decreasing", "submodular",
             "strictly_positive", "strictly_decreasing", "strictly_submodular")
    return PDSReport(*(name not in w for name in names), witnesses=w)


def _integer_table(values: Sequence[Fraction]) -> np.ndarray:
    denom = math.lcm(*(x.denominator for x in values))
    ints = [x.numerator * (denom // x.denominator) for x in values]
    big = max((abs(v) for v in ints), default=0)
    return np.array(ints, dtype=np.int64 if big < 2**60 else object)


def submodular_violation(c: SetFunction) -> tuple[int, int] | None:
    """First pair ``(A, B)`` with ``c(A)+c(B) < c(A|B)+c(A&B)``, or None.

    For ``n <= 10`` every pair is examined (vectorized over an exact integer
    rescaling of the table); larger ground sets fall back to local squares.
    """
    n = c.n
    if n <= MAX_PAIRWISE:
        t = _integer_table(c.table)
        idx = np.arange(1 << n)
        union = np.bitwise_or.outer(idx, idx)
        inter = np.bitwise_and.outer(idx, idx)
        defect = t[:, None] + t[None, :] - t[union] - t[inter]
        bad = np.argwhere(defect < 0)
        if len(bad):
            a, b = bad[0]
            return int(a), int(b)
        return None
    report = check_pds(c)
    return None if report.submodular else report.witnesses["submodular"]


@dataclass(frozen=True)
class ProductReport:
    submodular: bool
    preconditions_ok: bool
    failed_precondition: str | None = None
    witness: tuple[int, int] | None = None

    def __bool__(self):
        return self.submodular and self.preconditions_ok


def check_product_submodular(c: SetFunction, m: Matroid) -> ProductReport:
    """Exhaustively test whether ``A -> c(A) rk(A)`` is submodular.

    A nonnegative decreasing submodular ``c`` times a matroid rank is always
    submodular.  When ``c`` breaks a hypothesis the report says which one,
    so such a failure is never mistaken for a counterexample.
    """
    if c.n != m.n:
        raise InputError("set function and matroid live on different ground sets")
    failed = None
    pds = check_pds(c)
    if not pds.positive:
        failed = "c nonnegative"
    elif not pds.decreasing:
        failed = "c decreasing"
    elif not pds.submodular:
        failed = "c submodular"
    elif m.n <= 16 and not check_rank_axioms(m):
        failed = "rank axioms"
    rk = m.rank_table
    product = SetFunction(c.n, [x * r for x, r in zip(c.table, rk)])
    witness = submodular_violation(product)
    return ProductReport(witness is None, failed is None, failed, witness)


class PDSTuple:
    """An r-tuple of PDS functions ``(b^1, ..., b^r)`` with ``b_min = min_i b^i(V) > 0``."""

    def __init__(self, functions: Sequence[SetFunction], validate: bool = True):
        self.functions = tuple(functions)
        if not self.functions:
            raise InputError("a PDS tuple needs at least one function")
        self.n = self.functions[0].n
        if any(f.n != self.n for f in self.functions):
            raise InputError("PDS tuple functions must share a ground set")
        if validate and self.n <= MAX_PDS_CHECK:
            for i, f in enumerate(self.functions):
                report = check_pds(f)
                if not report.is_pds:
                    raise InputError(f"b^{i + 1} is not PDS: {'; '.join(report.lines())}")
        if self.b_min <= 0:
            raise InputError("b^i(V) must be positive for every i")

    @classmethod
    def ones(cls, n: int, r: int) -> "PDSTuple":
        one = SetFunction.ones(n)
        return cls([one] * r, validate=False)

    @cached_property
    def b_min(self) -> Fraction:
        full = (1 << self.n) - 1
        return min(f[full] for f in self.functions)

    def __len__(self):
        return len(self.functions)

    def __getitem__(self, i) -> SetFunction:
        return self.functions[i]

    def __iter__(self):
        return iter(self.functions)

    def __eq__(self, other):
        return isinstance(other, PDSTuple) and self.functions == other.functions

    def __hash__(self):
        return hash(self.functions)

    def __repr__(self):
        return f"PDSTuple(r={len(self.functions)}, n={self.n}, b_min={self.b_min})"


MAX_HALVINGS = 64


def perturb_tuple(b: PDSTuple, epsilon, seed: int, sustain: str = "all") -> PDSTuple:
    """Move every ``b^i`` to a nearby strictly PDS function.

    Adds ``epsilon/2`` times the strictly PDS direction
    ``u(A) = (n^2 - |A|^2) / 2n^2`` (zero on ``V``) plus independent random
    noise below ``epsilon / 8n^2``.  The noise is smaller than the strict
    margins of the ``u`` term, so the result is strictly PDS whenever ``b``
    is PDS, and it lies within ``epsilon`` of ``b`` in the sup norm.

    ``sustain="all"`` keeps every ``b^i(V)``.  ``sustain="min"`` keeps only
    ``b^i(V)`` of the first function attaining ``b_min``, so ``b_min`` is
    unchanged while ties between different ``b^i(V) rk_i(V)`` are broken.
    """
    eps = rational(epsilon)
    if eps <= 0:
        raise InputError(f"perturbation epsilon must be positive, got {eps}")
    if sustain not in ("all", "min"):
        raise InputError(f"sustain must be 'all' or 'min', got {sustain!r}")
    n = b.n
    full = (1 << n) - 1
    anchor = next(i for i, f in enumerate(b) if f[full] == b.b_min)
    rng = random.Random(seed)
    for _ in range(MAX_HALVINGS):
        t = eps / 2
        noise_scale = eps / (8 * n * n)
        out = []
        for i, f in enumerate(b):
            vals = []
            for m in range(1 << n):
                rho = Fraction(rng.randint(1, 1 << 20), 1 << 20)
                if m == full:
                    fixed = sustain == "all" or i == anchor
                    vals.append(f[m] if fixed else f[m] + rho * noise_scale)
                    continue
                u = Fraction(n * n - popcount(m) ** 2, 2 * n * n)
                vals.append(f[m] + t * u + rho * noise_scale)
            out.append(SetFunction(n, vals))
        if n > MAX_PDS_CHECK or all(check_pds(g).is_strict for g in out):
            return PDSTuple(out, validate=False)
        eps /= 2
    raise InputError("perturbation could not preserve PDS after 64 halvings; is b PDS?")
