"""Structural analysis: neighborliness, coherence, edge certificates, bounds.

Everything boundary-sensitive (split constants, coherence values, edge
thresholds) is exact rational arithmetic; floats appear only in the final
bound values and entropies.  Each certificate produced here is re-verified
by direct summation or enumeration before it is reported, so solver or
sampling artifacts can only understate, never overstate, a guarantee.
"""

from __future__ import annotations

import math
import random
from collections.abc import Mapping, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from . import kernels
from ._simplex import matrix_game_value
from .core import Instance, delta_set
from .engine import CostStats

VERIFIED_EXHAUSTIVE = "verified_exhaustive"
FALSIFIED_WITNESS = "falsified_witness"
UNKNOWN_SAMPLED = "unknown_sampled"

DIAG_UNVERIFIED = "unverified_edges_dominate"
DIAG_DISCONNECTED = "not_strongly_connected"

DEFAULT_EXHAUSTIVE_LIMIT = 18
DEFAULT_SAMPLES = 10_000
DEFAULT_OPTIMAL_CAP = 12
DEFAULT_AUDIT_CAP = 15


class InstanceTooLarge(RuntimeError):
    """An exhaustive computation was asked for beyond its size cap."""


class NotADistribution(ValueError):
    pass


class OverstatedCertificate(ValueError):
    """A certificate claimed more coherence than it actually achieves."""


@dataclass(frozen=True)
class CoherenceCertificate:
    """A test distribution and the coherence value it provably achieves."""

    distribution: Mapping[int, Fraction]
    value: Fraction


@dataclass(frozen=True)
class EdgeReport:
    from_test: int
    to_test: int
    delta_size: int
    status: str
    edge_value: Fraction
    witness: tuple[int, ...] | None  # hypothesis indices attaining edge_value
    samples_tried: int


@dataclass(frozen=True)
class AlphaStarResult:
    value: Fraction
    diagnostic: str | None


@dataclass(frozen=True)
class BoundSet:
    lam: Fraction  # per-step contraction factor; None bounds mean "unbounded"
    nowak_worst: float | None
    split_worst: float | None
    split_average: float | None


@dataclass(frozen=True)
class AnalysisReport:
    k_min: int
    coherence: CoherenceCertificate
    edges: tuple[EdgeReport, ...]
    alpha_star: Fraction
    alpha_diagnostic: str | None
    beta: Fraction
    bounds: BoundSet
    exhaustive_limit: int
    sample_count: int
    seed: int
    edge_mode: str

    @property
    def lam(self) -> Fraction:
        return self.bounds.lam


@dataclass(frozen=True)
class BoundCheck:
    name: str
    bound: float | None  # None = unbounded, passes vacuously
    observed: float
    passed: bool
    margin: float | None


@dataclass(frozen=True)
class BoundsVerdict:
    checks: tuple[BoundCheck, ...]
    conditional: bool  # some edges were not exhaustively verified
    all_passed: bool


@dataclass(frozen=True)
class SubsetSplitAudit:
    passed: bool
    beta: Fraction
    witness: tuple[int, ...] | None  # hypothesis indices with no beta-split
    subsets_checked: int


@dataclass(frozen=True)
class NeighborlyEdgeAudit:
    passed: bool
    k_min: int
    pairs_checked: int
    pairs_skipped: int
    failures: tuple[tuple[int, int, Fraction], ...]


# ---------------------------------------------------------------------------
# k-neighborliness


def min_k(instance: Instance) -> tuple[int, tuple[tuple[int, int, int], ...]]:
    """Smallest k whose disagreement-at-most-k test graph is connected.

    Computed as the bottleneck of a minimum-bottleneck spanning tree over
    pairwise disagreement counts; returns (k, spanning edges as
    (weight, i, j) triples).
    """
    m = instance.m_tests
    if m == 1:
        return 0, ()
    cols = instance.columns
    edges = sorted(
        ((cols[i] ^ cols[j]).bit_count(), i, j)
        for i in range(m)
        for j in range(i + 1, m)
    )
    parent = list(range(m))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    picked: list[tuple[int, int, int]] = []
    k = 0
    for weight, i, j in edges:
        ri, rj = find(i), find(j)
        if ri == rj:
            continue
        parent[ri] = rj
        picked.append((weight, i, j))
        k = weight  # edges arrive in ascending order
        if len(picked) == m - 1:
            break
    return k, tuple(picked)


# ---------------------------------------------------------------------------
# Coherence (zero-sum game value over tests)


def coherence(instance: Instance) -> CoherenceCertificate:
    """Best provable guarantee that every hypothesis's expected outcome is central.

    If the instance has both an all-1 and an all-0 test column, half weight
    on each achieves the global maximum 1/2 directly.  Otherwise the value
    is solved as an exact matrix game; either way the reported value is
    re-verified against the certificate by direct summation.
    """
    full = instance.full_mask
    all_one = next((x for x, c in enumerate(instance.columns) if c == full), None)
    all_zero = next((x for x, c in enumerate(instance.columns) if c == 0), None)
    if all_one is not None and all_zero is not None:
        half = Fraction(1, 2)
        cert = CoherenceCertificate({all_one: half, all_zero: half}, half)
        assert _achieved_value(instance, cert.distribution) == half
        return cert

    distinct: dict[int, int] = {}
    for x, col in enumerate(instance.columns):
        distinct.setdefault(col, x)
    col_bits = list(distinct)
    reps = [distinct[c] for c in col_bits]

    n = instance.n
    strategies: dict[tuple[int, ...], None] = {}
    for h in range(n):
        for desired in (1, 0):
            payoff = tuple(
                1 if ((bits >> h) & 1) == desired else 0 for bits in col_bits
            )
            strategies.setdefault(payoff, None)
    matrix = [list(row) for row in zip(*strategies)]

    value, weights = matrix_game_value(matrix)
    dist = {reps[i]: w for i, w in enumerate(weights) if w != 0}
    achieved = _achieved_value(instance, dist)
    assert achieved == value, "game value must match its own certificate"
    return CoherenceCertificate(dist, achieved)


def _achieved_value(instance: Instance, dist: Mapping[int, Fraction]) -> Fraction:
    worst = Fraction(1, 2)
    for row in instance.rows:
        expected = sum(
            (w for x, w in dist.items() if (row >> x) & 1), Fraction(0)
        )
        worst = min(worst, expected, 1 - expected)
    return worst


def verify_certificate(
    instance: Instance, certificate: CoherenceCertificate
) -> Fraction:
    """Exactly recompute what a certificate achieves; never trusts its claim."""
    dist = certificate.distribution
    if any(w < 0 for w in dist.values()):
        raise NotADistribution("negative weight")
    if sum(dist.values(), Fraction(0)) != 1:
        raise NotADistribution("weights must sum to 1")
    if any(not 0 <= x < instance.m_tests for x in dist):
        raise NotADistribution("weight on unknown test index")
    achieved = _achieved_value(instance, dist)
    if achieved < certificate.value:
        raise OverstatedCertificate(
            f"certificate claims {certificate.value}, achieves {achieved}"
        )
    return achieved


# ---------------------------------------------------------------------------
# Edge certificates and the strong-connectivity threshold


def _restricted_masks(instance: Instance, members: Sequence[int]) -> list[int]:
    raw = []
    for col in instance.columns:
        m = 0
        for k, h in enumerate(members):
            m |= ((col >> h) & 1) << k
        raw.append(m)
    return kernels.prepare_masks(raw, len(members))


def _decode_subset(
    subset: int | None, members: Sequence[int]
) -> tuple[int, ...] | None:
    if subset is None:
        return None
    return tuple(members[k] for k in range(len(members)) if (subset >> k) & 1)


def edge_alpha(
    instance: Instance,
    x: int,
    x_prime: int,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    candidate_alpha: Fraction | None = None,
) -> EdgeReport:
    """Certify the worst split over subsets of the x -> x_prime disagreement set.

    Small disagreement sets are enumerated exhaustively; larger ones are
    probed with seeded random subsets (each member kept with probability
    1/2, rejecting singletons), which can falsify a candidate alpha but
    never verify one.
    """
    ds = delta_set(instance, x, x_prime)
    size = ds.size
    if size <= 1:
        return EdgeReport(
            x, x_prime, size, VERIFIED_EXHAUSTIVE, Fraction(1, 2), None, 0
        )
    members = ds.member_indices()
    masks = _restricted_masks(instance, members)
    if size <= exhaustive_limit:
        num, den, wit = kernels.min_subset_split(masks, size)
        return EdgeReport(
            x,
            x_prime,
            size,
            VERIFIED_EXHAUSTIVE,
            Fraction(num, den),
            _decode_subset(wit, members),
            0,
        )
    rng = random.Random(seed)
    subsets = []
    while len(subsets) < samples:
        s = rng.getrandbits(size)
        if s.bit_count() >= 2:
            subsets.append(s)
    num, den, wit = kernels.batch_min_split(masks, subsets)
    value = Fraction(num, den)
    witness = _decode_subset(wit, members)
    if candidate_alpha is not None and value < candidate_alpha:
        status = FALSIFIED_WITNESS
    else:
        status = UNKNOWN_SAMPLED
    return EdgeReport(x, x_prime, size, status, value, witness, samples)


def _bitstring_ids(instance: Instance) -> bool:
    ids = [t.id for t in instance.tests]
    length = len(ids[0])
    return all(len(i) == length and not i.strip("01") for i in ids)


def _adjacency_pairs(instance: Instance) -> list[tuple[int, int]] | None:
    """Ordered neighbor pairs under the instance's natural test geometry."""
    tests = instance.tests
    if all(t.meta and "coords" in t.meta for t in tests):
        index = {tuple(t.meta["coords"]): i for i, t in enumerate(tests)}
        pairs = []
        for i, t in enumerate(tests):
            coords = tuple(t.meta["coords"])
            for dim in range(len(coords)):
                for delta in (-1, 1):
                    shifted = list(coords)
                    shifted[dim] += delta
                    j = index.get(tuple(shifted))
                    if j is not None:
                        pairs.append((i, j))
        return sorted(set(pairs))
    if all(t.meta and "cycle_index" in t.meta for t in tests):
        m = len(tests)
        by_cycle = sorted(range(m), key=lambda i: tests[i].meta["cycle_index"])
        pairs = []
        for pos in range(m):
            i, j = by_cycle[pos], by_cycle[(pos + 1) % m]
            pairs.extend([(i, j), (j, i)])
        return sorted(set(pairs))
    if _bitstring_ids(instance):
        index = {t.id: i for i, t in enumerate(instance.tests)}
        pairs = []
        for i, t in enumerate(instance.tests):
            for pos in range(len(t.id)):
                flipped = t.id[:pos] + ("1" if t.id[pos] == "0" else "0") + t.id[pos + 1 :]
                j = index.get(flipped)
                if j is not None:
                    pairs.append((i, j))
        return sorted(set(pairs))
    return None


def candidate_edges(
    instance: Instance,
    mode: str | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
) -> tuple[str, list[tuple[int, int]]]:
    """Resolve the candidate edge set: adjacency preset or all small pairs.

    Returns the mode actually used, which matters when a preset is
    requested but no adjacency structure is derivable.
    """
    if mode is None:
        mode = str(instance.params.get("edge_preset", "all"))
    if mode in ("l1", "cycle"):
        pairs = _adjacency_pairs(instance)
        if pairs is not None:
            return "l1", pairs
        mode = "all"
    if mode != "all":
        raise ValueError(f"unknown edge mode {mode!r}")
    m = instance.m_tests
    pairs = [
        (i, j)
        for i in range(m)
        for j in range(m)
        if i != j and delta_set(instance, i, j).size <= exhaustive_limit
    ]
    return "all", pairs


def _strongly_connected(n_nodes: int, edges: Sequence[tuple[int, int]]) -> bool:
    if n_nodes <= 1:
        return True
    forward: list[list[int]] = [[] for _ in range(n_nodes)]
    backward: list[list[int]] = [[] for _ in range(n_nodes)]
    for i, j in edges:
        forward[i].append(j)
        backward[j].append(i)
    for adjacency in (forward, backward):
        seen = [False] * n_nodes
        seen[0] = True
        stack = [0]
        count = 1
        while stack:
            node = stack.pop()
            for nxt in adjacency[node]:
                if not seen[nxt]:
                    seen[nxt] = True
                    count += 1
                    stack.append(nxt)
        if count != n_nodes:
            return False
    return True


def alpha_star(
    instance: Instance, reports: Sequence[EdgeReport]
) -> AlphaStarResult:
    """Largest verified edge value whose edge digraph is strongly connected.

    Only exhaustively verified edges can support the threshold; if strong
    connectivity would need unverified ones, that is reported as a
    diagnostic rather than guessed.
    """
    m = instance.m_tests
    if m == 1:
        return AlphaStarResult(Fraction(1, 2), None)
    verified = [r for r in reports if r.status == VERIFIED_EXHAUSTIVE]
    values = sorted({r.edge_value for r in verified}, reverse=True)
    for value in values:
        edges = [
            (r.from_test, r.to_test) for r in verified if r.edge_value >= value
        ]
        if _strongly_connected(m, edges):
            return AlphaStarResult(value, None)
    if len(verified) < len(reports):
        all_edges = [(r.from_test, r.to_test) for r in reports]
        if _strongly_connected(m, all_edges):
            return AlphaStarResult(Fraction(0), DIAG_UNVERIFIED)
    return AlphaStarResult(Fraction(0), DIAG_DISCONNECTED)


# ---------------------------------------------------------------------------
# Bound formulas


def beta_of(c: Fraction, alpha: Fraction) -> Fraction:
    """Guaranteed per-step split constant from coherence c and edge threshold alpha."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        return Fraction(0)
    return min(Fraction(c), alpha / (1 + 2 * alpha))


def binary_entropy(p: Fraction | float) -> float:
    """Entropy in bits of a coin with success probability p; H(0) = H(1) = 0."""
    p = float(p)
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability out of range: {p}")
    if p in (0.0, 1.0):
        return 0.0
    return -(p * math.log2(p) + (1.0 - p) * math.log2(1.0 - p))


def compute_bounds(n: int, c: Fraction, k: int, beta: Fraction) -> BoundSet:
    """Worst/average query-cost bounds from the structural constants.

    Degenerate inputs (zero coherence or zero split guarantee) yield None
    bounds, rendered as "unbounded" downstream; n = 1 needs no queries at
    all, so every bound is 0.
    """
    lam = 1 - min(Fraction(c), Fraction(1, k + 2))
    if n <= 1:
        return BoundSet(lam, 0.0, 0.0, 0.0)
    log2n = math.log2(n)
    nowak = None if lam == 1 else log2n / -math.log2(float(lam))
    beta = Fraction(beta)
    if beta == 0:
        return BoundSet(lam, nowak, None, None)
    split_worst = log2n / -math.log2(1.0 - float(beta))
    split_average = log2n / binary_entropy(beta)
    return BoundSet(lam, nowak, split_worst, split_average)


# ---------------------------------------------------------------------------
# Exhaustive oracles and audits


def optimal_worst_case(instance: Instance, n_cap: int = DEFAULT_OPTIMAL_CAP) -> int:
    """Exact optimal worst-case query count via memoized recursion over subsets."""
    if instance.n > n_cap:
        raise InstanceTooLarge(
            f"optimal_worst_case capped at n <= {n_cap}, instance has n = {instance.n}"
        )
    cols = kernels.prepare_masks(instance.columns, instance.n)
    memo: dict[int, int] = {}

    def cost(v: int) -> int:
        if v & (v - 1) == 0:
            return 0
        cached = memo.get(v)
        if cached is not None:
            return cached
        size = v.bit_count()
        lower = (size - 1).bit_length()  # ceil(log2 size)
        best: int | None = None
        seen: set[int] = set()
        for c in cols:
            a = v & c
            if a == 0 or a == v:
                continue
            key = min(a, v ^ a)
            if key in seen:
                continue
            seen.add(key)
            depth = 1 + max(cost(a), cost(v ^ a))
            if best is None or depth < best:
                best = depth
                if best == lower:
                    break
        assert best is not None, "identifiable instance must admit a split"
        memo[v] = best
        return best

    return cost(instance.full_mask)


def subset_split_audit(
    instance: Instance, beta: Fraction, n_cap: int = DEFAULT_AUDIT_CAP
) -> SubsetSplitAudit:
    """Brute-force check that every subset of >= 2 hypotheses has a beta-split.

    Enumerates all 2^n subsets, so it is capped; beta <= 0 passes vacuously.
    """
    if instance.n > n_cap:
        raise InstanceTooLarge(
            f"subset_split_audit capped at n <= {n_cap}, instance has n = {instance.n}"
        )
    beta = Fraction(beta)
    if beta <= 0:
        return SubsetSplitAudit(True, beta, None, 0)
    n = instance.n
    masks = kernels.prepare_masks(instance.columns, n)
    witness = kernels.find_split_below(masks, n, beta.numerator, beta.denominator)
    checked = (1 << n) - n - 1
    if witness is None:
        return SubsetSplitAudit(True, beta, None, checked)
    members = tuple(h for h in range(n) if (witness >> h) & 1)
    return SubsetSplitAudit(False, beta, members, checked)


def neighborly_edge_audit(
    instance: Instance, exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT
) -> NeighborlyEdgeAudit:
    """Check that every k_min-disagreement pair certifies a 1/k_min edge value.

    Implication being audited: pairs connected in the k-neighborly sense
    must also be split-neighborly at 1/k.  Disagreement sets beyond the
    exhaustive limit are skipped and counted, never guessed.
    """
    k, _ = min_k(instance)
    if k < 1:
        return NeighborlyEdgeAudit(True, k, 0, 0, ())
    threshold = Fraction(1, k)
    cols = instance.columns
    m = instance.m_tests
    checked = 0
    skipped = 0
    failures: list[tuple[int, int, Fraction]] = []
    for i in range(m):
        for j in range(i + 1, m):
            if (cols[i] ^ cols[j]).bit_count() > k:
                continue
            for a, b in ((i, j), (j, i)):
                ds = delta_set(instance, a, b)
                if ds.size <= 1:
                    continue
                if ds.size > exhaustive_limit:
                    skipped += 1
                    continue
                members = ds.member_indices()
                masks = _restricted_masks(instance, members)
                num, den, _ = kernels.min_subset_split(masks, ds.size)
                checked += 1
                value = Fraction(num, den)
                if value < threshold:
                    failures.append((a, b, value))
    return NeighborlyEdgeAudit(not failures, k, checked, skipped, tuple(failures))


# ---------------------------------------------------------------------------
# Full-instance analysis and bound verification


def analyze_instance(
    instance: Instance,
    edge_mode: str | None = None,
    exhaustive_limit: int = DEFAULT_EXHAUSTIVE_LIMIT,
    samples: int = DEFAULT_SAMPLES,
    seed: int = 0,
    threads: int = 1,
) -> AnalysisReport:
    """Compute every structural quantity and the derived query-cost bounds."""
    k, _ = min_k(instance)
    certificate = coherence(instance)
    mode, pairs = candidate_edges(instance, edge_mode, exhaustive_limit)
    hint = instance.params.get("alpha_hint")
    candidate_alpha = Fraction(str(hint)) if hint else None

    def one(item: tuple[int, tuple[int, int]]) -> EdgeReport:
        index, (i, j) = item
        return edge_alpha(
            instance,
            i,
            j,
            exhaustive_limit=exhaustive_limit,
            samples=samples,
            seed=seed ^ index,
            candidate_alpha=candidate_alpha,
        )

    items = list(enumerate(pairs))
    if threads > 1 and len(items) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            reports = tuple(pool.map(one, items))
    else:
        reports = tuple(one(item) for item in items)

    star = alpha_star(instance, reports)
    beta = beta_of(certificate.value, star.value)
    bounds = compute_bounds(instance.n, certificate.value, k, beta)
    return AnalysisReport(
        k_min=k,
        coherence=certificate,
        edges=reports,
        alpha_star=star.value,
        alpha_diagnostic=star.diagnostic,
        beta=beta,
        bounds=bounds,
        exhaustive_limit=exhaustive_limit,
        sample_count=samples,
        seed=seed,
        edge_mode=mode,
    )


def verify_bounds(
    instance: Instance,
    report: AnalysisReport,
    stats: CostStats,
    optimal_cap: int = DEFAULT_OPTIMAL_CAP,
) -> BoundsVerdict:
    """Compare exhaustive engine results against the report's bounds."""

    def check(name: str, bound: float | None, observed: float) -> BoundCheck:
        if bound is None:
            return BoundCheck(name, None, observed, True, None)
        return BoundCheck(name, bound, observed, observed <= bound, bound - observed)

    worst = float(stats.worst_case)
    checks = [
        check("worst_case<=split_worst", report.bounds.split_worst, worst),
        check("worst_case<=nowak_worst", report.bounds.nowak_worst, worst),
        check("average<=split_average", report.bounds.split_average, float(stats.average)),
    ]
    if instance.n <= optimal_cap:
        optimal = optimal_worst_case(instance, optimal_cap)
        checks.append(
            BoundCheck(
                "optimal<=worst_case",
                worst,
                float(optimal),
                optimal <= stats.worst_case,
                worst - optimal,
            )
        )
    conditional = any(e.status != VERIFIED_EXHAUSTIVE for e in report.edges)
    return BoundsVerdict(
        checks=tuple(checks),
        conditional=conditional,
        all_passed=all(c.passed for c in checks),
    )
