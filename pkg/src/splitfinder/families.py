"""Deterministic instance generators for every supported problem family.

Each generator materializes the full outcome matrix, funnels it through
``validate_instance`` (so identifiability is always asserted, not assumed),
and records enough metadata in ``params`` for downstream analysis presets:
``edge_preset`` names the adjacency structure used for candidate edges and
``alpha_hint`` carries the split constant the family is expected to certify.

Generators are pure: identical parameters produce a bit-identical instance,
including record ordering (tests sorted lexicographically by coordinates or
bit string, hypotheses by their canonical metadata encoding).
"""

from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np

from .core import Instance, validate_instance


class BadParams(ValueError):
    """Family parameters violate the family's preconditions."""


class TooFewPoints(BadParams):
    pass


class EmptyFamily(ValueError):
    """No hypothesis satisfies the family constraints at these parameters."""


class NotAxisSymmetric(BadParams):
    pass


class NotAxisConvex(BadParams):
    pass


def _fraction_str(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}"


def _coord_id(coords: tuple[int, ...]) -> str:
    return ",".join(str(c) for c in coords)


def _build(name, family, params, tests, hypotheses) -> Instance:
    return validate_instance(
        {
            "name": name,
            "family": family,
            "params": params,
            "tests": tests,
            "hypotheses": hypotheses,
        }
    )


# ---------------------------------------------------------------------------
# Linear classifiers on a convex polygon (cyclic-arc model)


def gen_convex_polygon(m_points: int, balanced: bool) -> Instance:
    """Linear classifiers over the vertices of a convex polygon.

    Tests are the m cycle positions; hypotheses are the contiguous positive
    arcs (each equivalence class of linear classifiers labels one arc +).
    With ``balanced`` only arcs whose positive fraction lies in [1/4, 3/4]
    are kept; otherwise every arc with both labels present.
    """
    if m_points < 3:
        raise TooFewPoints(f"convex polygon needs >= 3 points, got {m_points}")
    m = m_points
    if balanced:
        lo = -(-m // 4)  # ceil(m/4)
        lengths = range(lo, m - lo + 1)
    else:
        lengths = range(1, m)

    tests = [{"id": f"p{i}", "meta": {"cycle_index": i}} for i in range(m)]
    hypotheses = []
    for start in range(m):
        for length in lengths:
            outcomes = "".join(
                "1" if (v - start) % m < length else "0" for v in range(m)
            )
            hypotheses.append(
                {
                    "id": f"arc{start}+{length}",
                    "outcomes": outcomes,
                    "meta": {"arc_start": start, "arc_len": length},
                }
            )
    params = {
        "m": m,
        "balanced": balanced,
        "edge_preset": "cycle",
        "alpha_hint": "1/3",
    }
    name = f"polygon_m{m}_{'balanced' if balanced else 'all'}"
    return _build(name, "convex_polygon", params, tests, hypotheses)


# ---------------------------------------------------------------------------
# Monotone disjunctions and CNF formulas over bit-vector tests


def _bitstring_tests(d: int) -> list[dict]:
    return [{"id": "".join(bits)} for bits in itertools.product("01", repeat=d)]


def gen_disjunction(d: int, m: int) -> Instance:
    """Monotone disjunctions of at most m of d variables; tests are all 2^d inputs."""
    if not 1 <= m <= d:
        raise BadParams(f"disjunction needs 1 <= m <= d, got d={d}, m={m}")
    tests = _bitstring_tests(d)
    hypotheses = []
    for size in range(1, m + 1):
        for variables in itertools.combinations(range(1, d + 1), size):
            outcomes = "".join(
                "1" if any(t["id"][v - 1] == "1" for v in variables) else "0"
                for t in tests
            )
            hypotheses.append(
                {
                    "id": "|".join(f"x{v}" for v in variables),
                    "outcomes": outcomes,
                    "meta": {"vars": list(variables)},
                }
            )
    params = {
        "d": d,
        "m": m,
        "edge_preset": "l1",
        "alpha_hint": _fraction_str(Fraction(1, m + 1)),
    }
    return _build(f"disjunction_d{d}_m{m}", "disjunction", params, tests, hypotheses)


def _disjoint_clause_sets(d: int, m: int, l: int) -> list[tuple[tuple[int, ...], ...]]:
    """All unordered collections of l pairwise-disjoint m-subsets of {1..d}.

    Canonical order: clauses sorted by minimum element, enforced during the
    recursion so each collection is produced exactly once.
    """
    out: list[tuple[tuple[int, ...], ...]] = []

    def rec(available: tuple[int, ...], min_floor: int, acc: tuple) -> None:
        if len(acc) == l:
            out.append(acc)
            return
        candidates = [v for v in available if v > min_floor]
        for clause in itertools.combinations(candidates, m):
            remaining = tuple(v for v in available if v not in clause)
            rec(remaining, clause[0], acc + (clause,))

    rec(tuple(range(1, d + 1)), 0, ())
    return out


def gen_monotone_cnf(d: int, m: int, l: int) -> Instance:
    """Conjunctions of l variable-disjoint disjunctions of exactly m variables."""
    if m < 1 or l < 1 or l * m > d:
        raise BadParams(f"monotone CNF needs m,l >= 1 and l*m <= d, got d={d}, m={m}, l={l}")
    tests = _bitstring_tests(d)
    hypotheses = []
    for clauses in _disjoint_clause_sets(d, m, l):
        outcomes = "".join(
            "1"
            if all(any(t["id"][v - 1] == "1" for v in clause) for clause in clauses)
            else "0"
            for t in tests
        )
        hypotheses.append(
            {
                "id": "&".join(
                    "(" + "|".join(f"x{v}" for v in clause) + ")" for clause in clauses
                ),
                "outcomes": outcomes,
                "meta": {"clauses": [list(c) for c in clauses]},
            }
        )
    params = {
        "d": d,
        "m": m,
        "l": l,
        "edge_preset": "l1",
        "alpha_hint": _fraction_str(Fraction(1, m + 1 + 3 * (l - 1))),
    }
    return _build(
        f"monotone_cnf_d{d}_m{m}_l{l}", "monotone_cnf", params, tests, hypotheses
    )


# ---------------------------------------------------------------------------
# Object localization on the integer grid


def box_offsets(radii: tuple[int, ...]) -> list[tuple[int, ...]]:
    """All integer points of the axis-symmetric box with the given radii."""
    return [
        tuple(p) for p in itertools.product(*[range(-r, r + 1) for r in radii])
    ]


def l1_ball_offsets(d: int, radius: int) -> list[tuple[int, ...]]:
    """All integer points with L1 norm at most radius in d dimensions."""
    pts = []
    for p in itertools.product(range(-radius, radius + 1), repeat=d):
        if sum(abs(c) for c in p) <= radius:
            pts.append(p)
    return pts


def plus_offsets(d: int, l: int) -> list[tuple[int, ...]]:
    """Axis segments of radius l through the origin (a 'plus' in d dimensions)."""
    pts = {tuple([0] * d)}
    for i in range(d):
        for j in range(-l, l + 1):
            p = [0] * d
            p[i] = j
            pts.add(tuple(p))
    return sorted(pts)


def _localization_instance(
    name: str,
    family: str,
    params: dict,
    offsets: list[tuple[int, ...]],
    hypothesis_points: list[tuple[int, ...]],
    test_points: list[tuple[int, ...]],
) -> Instance:
    offset_set = set(offsets)
    tests = [{"id": _coord_id(x), "meta": {"coords": list(x)}} for x in test_points]
    hypotheses = []
    for z in hypothesis_points:
        outcomes = "".join(
            "1" if tuple(x - c for x, c in zip(pt, z)) in offset_set else "0"
            for pt in test_points
        )
        hypotheses.append(
            {"id": _coord_id(z), "outcomes": outcomes, "meta": {"coords": list(z)}}
        )
    return _build(name, family, params, tests, hypotheses)


def gen_box_localization(
    radii: tuple[int, ...] | list[int], center: tuple[int, ...] | None = None
) -> Instance:
    """Locate a hidden point sensed through an axis-symmetric box.

    Hypotheses are all centers within box reach of ``center`` (so one test
    column is all-1), and tests fill the hypothesis region dilated by
    radius+1 per dimension (so all-0 columns exist too).
    """
    radii = tuple(int(r) for r in radii)
    if not radii or any(r < 0 for r in radii):
        raise BadParams(f"box radii must be nonnegative, got {radii!r}")
    d = len(radii)
    center = tuple(int(c) for c in (center or (0,) * d))
    if len(center) != d:
        raise BadParams("center dimension must match radii")

    hyp_points = [
        tuple(c + o for c, o in zip(center, off)) for off in box_offsets(radii)
    ]
    test_ranges = [
        range(center[i] - 2 * radii[i] - 1, center[i] + 2 * radii[i] + 2)
        for i in range(d)
    ]
    test_points = [tuple(p) for p in itertools.product(*test_ranges)]
    params = {
        "r": list(radii),
        "center": list(center),
        "d": d,
        "edge_preset": "l1",
        "alpha_hint": "1/4",
    }
    name = f"box_d{d}_r{'x'.join(str(r) for r in radii)}"
    return _localization_instance(
        name, "box_localization", params, box_offsets(radii), hyp_points, test_points
    )


def _check_shape(offsets: list[tuple[int, ...]], d: int) -> None:
    offset_set = set(offsets)
    for p in offsets:
        for i in range(d):
            q = list(p)
            q[i] = -q[i]
            if tuple(q) not in offset_set:
                raise NotAxisSymmetric(
                    f"offset {p} has no mirror through axis {i}"
                )
    lines: dict[tuple, list[int]] = {}
    for p in offsets:
        for i in range(d):
            key = (i,) + p[:i] + p[i + 1 :]
            lines.setdefault(key, []).append(p[i])
    for key, vals in lines.items():
        if max(vals) - min(vals) + 1 != len(set(vals)):
            raise NotAxisConvex(
                f"axis-{key[0]} segment through {key[1:]} has gaps"
            )


def gen_shape_localization(
    offsets: list[tuple[int, ...]], center: tuple[int, ...] | None = None
) -> Instance:
    """Localization through an arbitrary axis-symmetric, axis-convex shape."""
    offsets = sorted(tuple(int(c) for c in p) for p in offsets)
    if not offsets:
        raise BadParams("shape needs at least one offset")
    d = len(offsets[0])
    if any(len(p) != d for p in offsets):
        raise BadParams("offsets must share one dimension")
    _check_shape(offsets, d)
    center = tuple(int(c) for c in (center or (0,) * d))
    if len(center) != d:
        raise BadParams("center dimension must match offsets")

    hyp_points = [tuple(c + o for c, o in zip(center, off)) for off in offsets]
    bbox = [max(abs(p[i]) for p in offsets) for i in range(d)]
    test_ranges = [
        range(
            min(z[i] for z in hyp_points) - bbox[i] - 1,
            max(z[i] for z in hyp_points) + bbox[i] + 2,
        )
        for i in range(d)
    ]
    test_points = [tuple(p) for p in itertools.product(*test_ranges)]
    params = {
        "offsets": [list(p) for p in offsets],
        "center": list(center),
        "d": d,
        "edge_preset": "l1",
        "alpha_hint": _fraction_str(Fraction(1, 4 * d + 1)),
    }
    name = f"shape_d{d}_s{len(offsets)}"
    return _localization_instance(
        name, "shape_localization", params, offsets, hyp_points, test_points
    )


# ---------------------------------------------------------------------------
# Discrete linear classifiers


def _weight_id(w: tuple[int, ...], b: int) -> str:
    symbols = "".join("+" if wi > 0 else "-" if wi < 0 else "0" for wi in w)
    return f"w{symbols}b{b}"


def gen_discrete_linear(d: int, r: Fraction | int | str) -> Instance:
    """Thresholded {-1,0,1} weight vectors with balanced over/undershoot.

    Keeps every (w, b) with w in {-1,0,1}^d, b in [-d, d] whose overshoot
    w+ - b and undershoot w- + b stay within ratio r of each other (minus a
    d/8 margin), then collapses classifiers with identical outcome rows.
    """
    r = Fraction(r)
    if d < 1 or r <= 0:
        raise BadParams(f"discrete linear needs d >= 1 and r > 0, got d={d}, r={r}")
    margin = Fraction(d, 8)

    feasible_b: dict[tuple[int, int], list[int]] = {}
    for plus in range(d + 1):
        for minus in range(d + 1 - plus):
            bs = [
                b
                for b in range(-d, d + 1)
                if plus - b <= r * (minus + b) - margin
                and minus + b <= r * (plus - b - 1) - margin
            ]
            if bs:
                feasible_b[(plus, minus)] = bs

    if not feasible_b:
        raise EmptyFamily(f"no (w, b) satisfies the constraints at d={d}, r={r}")

    test_bits = list(itertools.product((0, 1), repeat=d))
    x_matrix = np.array(test_bits, dtype=np.int64)

    hypotheses = []
    seen_rows: dict[str, None] = {}
    for w in itertools.product((-1, 0, 1), repeat=d):
        plus = sum(1 for wi in w if wi > 0)
        minus = sum(1 for wi in w if wi < 0)
        bs = feasible_b.get((plus, minus))
        if not bs:
            continue
        dots = x_matrix @ np.array(w, dtype=np.int64)
        for b in bs:
            outcomes = "".join("1" if v > b else "0" for v in dots)
            if outcomes in seen_rows:
                continue
            seen_rows[outcomes] = None
            hypotheses.append(
                {
                    "id": _weight_id(w, b),
                    "outcomes": outcomes,
                    "meta": {"w": list(w), "b": b},
                }
            )

    if not hypotheses:
        raise EmptyFamily(f"no (w, b) satisfies the constraints at d={d}, r={r}")

    tests = [{"id": "".join(str(bit) for bit in bits)} for bits in test_bits]
    alpha = Fraction(1, max(16, 8 * r))
    params = {
        "d": d,
        "r": _fraction_str(r),
        "b_range": [-d, d],
        "edge_preset": "l1",
        "alpha_hint": _fraction_str(alpha),
    }
    name = f"linear_d{d}_r{r.numerator}" + (
        f"_{r.denominator}" if r.denominator != 1 else ""
    )
    return _build(name, "discrete_linear", params, tests, hypotheses)


def gen_linear_kcase(d: int) -> Instance:
    """Half-ones weight vectors at threshold d/4 - 1 (the high-disagreement case)."""
    if d % 4 != 0 or d < 4:
        raise BadParams(f"linear_kcase needs d divisible by 4, got {d}")
    b = d // 4 - 1
    test_bits = list(itertools.product((0, 1), repeat=d))
    test_masks = [
        sum(bit << i for i, bit in enumerate(bits)) for bits in test_bits
    ]
    hypotheses = []
    for ones in itertools.combinations(range(d), d // 2):
        w_mask = sum(1 << i for i in ones)
        outcomes = "".join(
            "1" if (w_mask & t).bit_count() > b else "0" for t in test_masks
        )
        w = [1 if i in ones else 0 for i in range(d)]
        hypotheses.append(
            {"id": _weight_id(tuple(w), b), "outcomes": outcomes, "meta": {"w": w, "b": b}}
        )
    tests = [{"id": "".join(str(bit) for bit in bits)} for bits in test_bits]
    params = {"d": d, "b": b, "edge_preset": "l1"}
    return _build(f"linear_kcase_d{d}", "linear_kcase", params, tests, hypotheses)


# ---------------------------------------------------------------------------
# Negative-certificate families


def gen_counterexample_disjunction(m: int) -> Instance:
    """d = m+1 variables, one disjunction per omitted variable.

    The family whose best full-space split is exactly 1/(m+1), certifying
    that no test reaches a 1/m split constant.
    """
    if m < 2:
        raise BadParams(f"cx_disjunction needs m >= 2, got {m}")
    d = m + 1
    tests = _bitstring_tests(d)
    hypotheses = []
    for omitted in range(1, d + 1):
        variables = [v for v in range(1, d + 1) if v != omitted]
        outcomes = "".join(
            "1" if any(t["id"][v - 1] == "1" for v in variables) else "0"
            for t in tests
        )
        hypotheses.append(
            {
                "id": "|".join(f"x{v}" for v in variables),
                "outcomes": outcomes,
                "meta": {"vars": variables, "omitted": omitted},
            }
        )
    params = {"m": m, "d": d, "edge_preset": "l1"}
    return _build(f"cx_disjunction_m{m}", "cx_disjunction", params, tests, hypotheses)


def gen_counterexample_plus(d: int, l: int) -> Instance:
    """Plus-shaped sensing field with hypotheses at the 2d arm tips.

    Tests are restricted to the axis-aligned dilation of the arms (radius
    2l+1 per axis); on that region the best full-space split is exactly
    1/(2d), below the 1/(2d-1) threshold.  Off-axis grid points would break
    the certificate by pairing tips, so they are deliberately excluded.
    """
    if d < 2 or l < 1:
        raise BadParams(f"cx_plus needs d >= 2 and l >= 1, got d={d}, l={l}")
    offsets = plus_offsets(d, l)
    tips = []
    for i in range(d):
        for sign in (-1, 1):
            p = [0] * d
            p[i] = sign * l
            tips.append(tuple(p))
    tips.sort()
    test_points = sorted(set(plus_offsets(d, 2 * l + 1)))
    params = {"d": d, "l": l, "edge_preset": "l1"}
    return _localization_instance(
        f"cx_plus_d{d}_l{l}", "cx_plus", params, offsets, tips, test_points
    )


# ---------------------------------------------------------------------------
# Registry and CLI-facing parameter handling

FAMILIES = (
    "convex_polygon",
    "disjunction",
    "monotone_cnf",
    "box_localization",
    "shape_localization",
    "discrete_linear",
    "linear_kcase",
    "cx_disjunction",
    "cx_plus",
)


def _as_int(params: dict, key: str) -> int:
    try:
        return int(params[key])
    except KeyError:
        raise BadParams(f"missing required param {key!r}") from None
    except ValueError:
        raise BadParams(f"param {key!r} must be an integer") from None


def _as_bool(params: dict, key: str, default: bool | None = None) -> bool:
    if key not in params:
        if default is None:
            raise BadParams(f"missing required param {key!r}")
        return default
    value = str(params[key]).strip().lower()
    if value in ("1", "true", "yes"):
        return True
    if value in ("0", "false", "no"):
        return False
    raise BadParams(f"param {key!r} must be a boolean, got {params[key]!r}")


def _as_int_list(params: dict, key: str) -> list[int]:
    try:
        raw = params[key]
    except KeyError:
        raise BadParams(f"missing required param {key!r}") from None
    if isinstance(raw, (list, tuple)):
        return [int(v) for v in raw]
    try:
        return [int(part) for part in str(raw).split(",") if part != ""]
    except ValueError:
        raise BadParams(f"param {key!r} must be a comma list of integers") from None


def _parse_offsets(raw: str) -> list[tuple[int, ...]]:
    try:
        return [
            tuple(int(c) for c in point.split(","))
            for point in raw.split(";")
            if point != ""
        ]
    except ValueError:
        raise BadParams("offsets must look like 'x,y;x,y;...'") from None


def generate(family: str, params: dict) -> Instance:
    """Build an instance from CLI-style string parameters."""
    if family == "convex_polygon":
        return gen_convex_polygon(_as_int(params, "m"), _as_bool(params, "balanced", True))
    if family == "disjunction":
        return gen_disjunction(_as_int(params, "d"), _as_int(params, "m"))
    if family == "monotone_cnf":
        return gen_monotone_cnf(
            _as_int(params, "d"), _as_int(params, "m"), _as_int(params, "l")
        )
    if family == "box_localization":
        center = _as_int_list(params, "center") if "center" in params else None
        return gen_box_localization(_as_int_list(params, "r"), center)
    if family == "shape_localization":
        if "offsets" in params:
            offsets = _parse_offsets(str(params["offsets"]))
        elif "l1_radius" in params:
            offsets = l1_ball_offsets(_as_int(params, "d"), _as_int(params, "l1_radius"))
        else:
            raise BadParams("shape_localization needs offsets=... or d= and l1_radius=")
        center = _as_int_list(params, "center") if "center" in params else None
        return gen_shape_localization(offsets, center)
    if family == "discrete_linear":
        try:
            ratio = Fraction(str(params["r"]))
        except KeyError:
            raise BadParams("missing required param 'r'") from None
        except ValueError:
            raise BadParams("param 'r' must be a rational like 2 or 3/2") from None
        return gen_discrete_linear(_as_int(params, "d"), ratio)
    if family == "linear_kcase":
        return gen_linear_kcase(_as_int(params, "d"))
    if family == "cx_disjunction":
        return gen_counterexample_disjunction(_as_int(params, "m"))
    if family == "cx_plus":
        return gen_counterexample_plus(_as_int(params, "d"), _as_int(params, "l"))
    raise BadParams(f"unknown family {family!r}; known: {', '.join(FAMILIES)}")
