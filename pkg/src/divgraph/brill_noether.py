"""Brill-Noether numerics and the bounded existence search.

Everything here is exact integer or rational arithmetic: the Brill-Noether
number rho, the factorial-product bound on the refinement index k needed
for a divisor of degree d and rank >= r to exist, the older bound it
improves on, and the search that walks refinements G^(0), G^(1), ... up to
the bound looking for a witness divisor.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Optional, Union

from .divisors import (
    Divisor,
    enumerate_classes,
    rank_at_least,
    reduce,
    vertex_divisor,
)
from .errors import (
    NegativeRhoError,
    NonIntegralBoundError,
    PreconditionViolatedError,
)
from .graphs import Multigraph, genus, refine


class _RRShortcut:
    """Marker returned by :func:`bn_bound` when g - d + r < 0: Riemann-Roch
    already forces rank >= d - g >= r on the unrefined graph, so k = 0
    suffices and the factorial formula does not apply."""

    _instance: Optional["_RRShortcut"] = None

    def __new__(cls) -> "_RRShortcut":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "RR_SHORTCUT"


RR_SHORTCUT = _RRShortcut()

Bound = Union[int, _RRShortcut]


def rho(g: int, d: int, r: int) -> int:
    """Brill-Noether number (r+1)(d-r) - g*r."""
    for name, value in (("g", g), ("d", d), ("r", r)):
        if value < 0:
            raise ValueError(f"{name} must be >= 0, got {value}")
    return (r + 1) * (d - r) - g * r


def bn_bound(g: int, d: int, r: int) -> Bound:
    """Strict upper bound on the refinement index k needed for a degree-d
    rank->=r divisor to exist on G^(k), for any genus-g graph.

    Returns g! * prod_{i=0..r} i! / (g-d+r+i)! as an exact integer.  The
    value is the intersection number of the Brill-Noether locus with rho
    theta-divisor translates, hence a positive integer whenever rho >= 0
    and g - d + r >= 0; a failed integrality check raises rather than
    rounding.  When g - d + r < 0 the formula is undefined and refinement
    is unnecessary, so :data:`RR_SHORTCUT` is returned.
    """
    if rho(g, d, r) < 0:
        raise NegativeRhoError(f"rho({g},{d},{r}) = {rho(g, d, r)} < 0")
    if g - d + r < 0:
        return RR_SHORTCUT
    value = Fraction(factorial(g))
    for i in range(r + 1):
        value *= Fraction(factorial(i), factorial(g - d + r + i))
    if value.denominator != 1 or value <= 0:
        raise NonIntegralBoundError(
            f"bound for (g,d,r)=({g},{d},{r}) evaluated to non-integral {value}"
        )
    return int(value)


def legacy_bound(n: int, m: int, d: int, r: int) -> int:
    """The earlier combinatorial bound (m + n^r * d)! * d^(m + n^r * d) for
    a graph with n vertices and m edges."""
    if n < 1 or m < 0 or d < 1 or r < 0:
        raise ValueError("need n >= 1, m >= 0, d >= 1, r >= 0")
    e = m + n**r * d
    return factorial(e) * d**e


def bound_chain_check(g: int, d: int, r: int) -> bool:
    """Exact-arithmetic verification that the factorial bound beats the
    legacy bound through the chain

        bn_bound <= g!(r!)^r < g!(d!)^r < g!d^(dr) < legacy_bound(2, g+1, d, r).

    The first comparison admits equality (it is tight at g - d + r = 0 with
    r = 1); the rest are strict.  Requires rho >= 0, g - d + r >= 0, r >= 1
    and d > r.
    """
    if rho(g, d, r) < 0 or g - d + r < 0 or r < 1 or d <= r:
        raise PreconditionViolatedError(
            f"(g,d,r)=({g},{d},{r}) violates rho>=0, g-d+r>=0, r>=1, d>r"
        )
    bound = bn_bound(g, d, r)
    assert isinstance(bound, int)
    fg = factorial(g)
    t1 = fg * factorial(r) ** r
    t2 = fg * factorial(d) ** r
    t3 = fg * d ** (d * r)
    return bound <= t1 < t2 < t3 < legacy_bound(2, g + 1, d, r)


@dataclass(frozen=True)
class BNParams:
    g: int
    d: int
    r: int


@dataclass(frozen=True)
class BoundReport:
    """The exact numerology for one (g, d, r) instance.  ``legacy_bound``
    is None for d = 0, where the older formula degenerates."""

    params: BNParams
    rho: int
    theorem_bound: Bound
    legacy_bound: Optional[int]
    k_range: tuple[int, int]


def bound_report(g: int, d: int, r: int) -> BoundReport:
    """Assemble rho, both bounds and the searched k interval.  The legacy
    bound uses the genus-minimal graph shape (2 vertices, g+1 edges)."""
    p = rho(g, d, r)
    if p < 0:
        raise NegativeRhoError(f"rho({g},{d},{r}) = {p} < 0")
    bound = bn_bound(g, d, r)
    k_hi = 0 if isinstance(bound, _RRShortcut) else bound - 1
    return BoundReport(
        params=BNParams(g, d, r),
        rho=p,
        theorem_bound=bound,
        legacy_bound=legacy_bound(2, g + 1, d, r) if d >= 1 else None,
        k_range=(0, k_hi),
    )


@dataclass(frozen=True)
class SearchLimits:
    """Resource caps for :func:`find_gdr`.  ``max_k`` overrides the bound's
    k range; ``max_classes`` caps the total number of divisor classes
    tested; ``jobs`` > 1 parallelizes class testing within each k."""

    max_k: Optional[int] = None
    max_classes: Optional[int] = None
    jobs: int = 1


@dataclass(frozen=True)
class SearchResult:
    found: bool
    k: Optional[int]
    witness: Optional[Divisor]
    classes_examined: int
    exhausted: bool
    limit_hit: Optional[str] = None


def _scan_chunk(args: tuple[Multigraph, int, list[tuple[int, tuple[int, ...]]]]):
    """Worker: first (index, coeffs) in the chunk whose divisor has rank >= r."""
    graph, r, chunk = args
    for idx, coeffs in chunk:
        if rank_at_least(graph, Divisor(graph, coeffs), r):
            return idx, coeffs
    return None


def _search_one_level(
    graph: Multigraph, d: int, r: int, budget: Optional[int], jobs: int
) -> tuple[Optional[Divisor], int, bool]:
    """Scan the degree-d classes of one refinement level for a rank->=r
    witness.  Returns (witness or None, classes examined, budget hit).

    The first witness in enumeration order wins regardless of ``jobs``;
    parallel scans report the same witness and count as the sequential path.
    """
    q = graph.vertices[0]
    stream = enumerate_classes(graph, q, d)
    if jobs <= 1:
        examined = 0
        for red in stream:
            if budget is not None and examined >= budget:
                return None, examined, True
            examined += 1
            if rank_at_least(graph, red.divisor, r):
                return red.divisor, examined, False
        return None, examined, False

    from collections import deque
    from concurrent.futures import ProcessPoolExecutor

    chunk_size = 32
    indexed = enumerate(stream)
    streamed = 0
    truncated = False
    stream_done = False
    winner: Optional[tuple[int, tuple[int, ...]]] = None

    with ProcessPoolExecutor(max_workers=jobs) as pool:
        pending: deque = deque()
        while True:
            while not stream_done and winner is None and len(pending) < 2 * jobs:
                chunk: list[tuple[int, tuple[int, ...]]] = []
                while len(chunk) < chunk_size:
                    if budget is not None and streamed >= budget:
                        truncated = next(indexed, None) is not None
                        stream_done = True
                        break
                    item = next(indexed, None)
                    if item is None:
                        stream_done = True
                        break
                    chunk.append((item[0], item[1].divisor.coeffs))
                    streamed += 1
                if chunk:
                    pending.append(pool.submit(_scan_chunk, (graph, r, chunk)))
                else:
                    break
            if not pending:
                break
            hit = pending.popleft().result()
            if hit is not None and winner is None:
                winner = hit

    if winner is not None:
        idx, coeffs = winner
        return Divisor(graph, coeffs), idx + 1, False
    return None, streamed, truncated


def find_gdr(
    graph: Multigraph, d: int, r: int, limits: Optional[SearchLimits] = None
) -> SearchResult:
    """Search refinements G^(0), G^(1), ... for a divisor of degree d and
    rank at least r.

    The k range defaults to [0, bn_bound - 1]; each level is searched
    completely (lowest k wins, then enumeration order) with no monotonicity
    assumption between levels.  When d - g >= r, Riemann-Roch makes every
    degree-d divisor work, so the search returns immediately at k = 0 with
    the class of d*(v0), validated like any other witness.  Resource limits
    produce a truncated result (found=False, exhausted=False), never an
    exception.
    """
    limits = limits or SearchLimits()
    g = genus(graph)
    if rho(g, d, r) < 0:
        raise NegativeRhoError(f"rho({g},{d},{r}) = {rho(g, d, r)} < 0")

    if d - g >= r:
        q = graph.vertices[0]
        witness = reduce(graph, vertex_divisor(graph, q, d), q).divisor
        if not rank_at_least(graph, witness, r):
            raise AssertionError(
                "Riemann-Roch shortcut produced an invalid witness; this is a bug"
            )
        return SearchResult(
            found=True, k=0, witness=witness, classes_examined=1, exhausted=True
        )

    bound = bn_bound(g, d, r)
    assert isinstance(bound, int)
    k_hi = bound - 1
    limit_hit = None
    if limits.max_k is not None and limits.max_k < k_hi:
        k_hi = limits.max_k
        limit_hit = "max-k"

    examined = 0
    for k in range(k_hi + 1):
        level_graph, _ = refine(graph, k)
        budget = None if limits.max_classes is None else limits.max_classes - examined
        if budget is not None and budget <= 0:
            return SearchResult(
                found=False,
                k=None,
                witness=None,
                classes_examined=examined,
                exhausted=False,
                limit_hit="max-classes",
            )
        witness, used, truncated = _search_one_level(
            level_graph, d, r, budget, limits.jobs
        )
        examined += used
        if witness is not None:
            return SearchResult(
                found=True,
                k=k,
                witness=witness,
                classes_examined=examined,
                exhausted=False,
            )
        if truncated:
            return SearchResult(
                found=False,
                k=None,
                witness=None,
                classes_examined=examined,
                exhausted=False,
                limit_hit="max-classes",
            )
    exhausted = limit_hit is None
    return SearchResult(
        found=False,
        k=None,
        witness=None,
        classes_examined=examined,
        exhausted=exhausted,
        limit_hit=limit_hit,
    )


@dataclass(frozen=True)
class GonalityResult:
    found: bool
    d: Optional[int]
    witness: Optional[Divisor]
    classes_examined: int


def gonality_search(graph: Multigraph, r: int, d_max: int) -> GonalityResult:
    """Smallest degree d <= d_max carrying a rank-r divisor on the graph
    itself (no refinement), with a witness.  Starts at d = r since the rank
    never exceeds the degree."""
    if r < 1:
        raise ValueError("r must be >= 1")
    q = graph.vertices[0]
    examined = 0
    for d in range(r, d_max + 1):
        for red in enumerate_classes(graph, q, d):
            examined += 1
            if rank_at_least(graph, red.divisor, r):
                return GonalityResult(True, d, red.divisor, examined)
    return GonalityResult(False, None, None, examined)
