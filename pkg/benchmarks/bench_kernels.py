#!/usr/bin/env python3
"""Benchmark the compiled subset-enumeration kernel against the pure fallback.

Runs ``min_subset_split`` on synthetic mask sets of growing width (the cost
is 2^width subsets x masks popcounts) plus one real disagreement-set edge,
and prints a side-by-side timing table.  The two backends are asserted to
agree on every case they both run.

Usage: python benchmarks/bench_kernels.py [--widths 12,14,16] [--masks 32]
"""

from __future__ import annotations

import argparse
import random
import time

from splitfinder.analysis import _restricted_masks  # noqa: PLC2701 - benchmark peeks at the hot path
from splitfinder.core import delta_set
from splitfinder.families import gen_disjunction
from splitfinder.kernels import BACKEND, pure

try:
    from splitfinder.kernels import _native as native
except ImportError:
    native = None


def _time(fn, *args) -> tuple[float, object]:
    start = time.perf_counter()
    result = fn(*args)
    return time.perf_counter() - start, result


def bench_case(label: str, masks: list[int], width: int, pure_cutoff: int) -> None:
    row = f"{label:<28} width={width:<3} masks={len(masks):<4}"
    native_t = None
    native_r = None
    if native is not None:
        native_t, native_r = _time(native.min_subset_split, masks, width)
        row += f" native={native_t:9.4f}s"
    else:
        row += " native=unavailable"
    if width <= pure_cutoff:
        pure_t, pure_r = _time(pure.min_subset_split, masks, width)
        row += f" pure={pure_t:9.4f}s"
        if native_r is not None:
            assert native_r == pure_r, f"backend mismatch on {label}"
            row += f" speedup={pure_t / native_t:8.1f}x"
    else:
        row += " pure=skipped (too slow at this width)"
    print(row)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--widths", default="12,14,16,18")
    parser.add_argument("--masks", type=int, default=32)
    parser.add_argument(
        "--pure-cutoff",
        type=int,
        default=16,
        help="largest width the pure backend is asked to enumerate",
    )
    args = parser.parse_args()

    print(f"selected backend at import: {BACKEND}")
    rng = random.Random(7)
    for width in (int(w) for w in args.widths.split(",")):
        masks = pure.prepare_masks(
            [rng.getrandbits(width) for _ in range(args.masks)], width
        )
        bench_case("synthetic random masks", masks, width, args.pure_cutoff)

    # A real edge: the disagreement set of the all-zeros test against one
    # bit flip in a width-12 disjunction instance (12 members, many masks).
    instance = gen_disjunction(12, 2)
    ds = delta_set(instance, 0, instance.test_index["1" + "0" * 11])
    members = ds.member_indices()
    masks = _restricted_masks(instance, members)
    bench_case("disjunction d=12 m=2 edge", masks, ds.size, args.pure_cutoff)


if __name__ == "__main__":
    main()
