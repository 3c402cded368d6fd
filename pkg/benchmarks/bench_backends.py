#!/usr/bin/env python3
"""Benchmark the compiled kernels against the numpy fallback.

Times the three grid kernels plus a full alpha bootstrap under each backend:

    python benchmarks/bench_backends.py --units 20000 --annotators 5 --labels 8

The bootstrap numbers are the headline: they exercise the kernels the way the
CLI does (one coincidence accumulation per resample).
"""

from __future__ import annotations

import argparse
import pathlib
import sys
import time

import numpy as np

sys.path.insert(0, str(pathlib.Path(__file__).parent.parent / "src"))

from agreekit import _backend, _pykernels  # noqa: E402
from agreekit.metrics import bootstrap_ci  # noqa: E402
from agreekit.simulate import SimulationSpec, generate  # noqa: E402

try:
    from agreekit import _ckernels
except ImportError:
    _ckernels = None

KERNEL_NAMES = ("label_counts", "pair_confusion", "coincidence_from_counts")


def timeit(fn, *args, repeat: int = 5) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn(*args)
        best = min(best, time.perf_counter() - start)
    return best


def bench_kernels(kernels, codes: np.ndarray, n_labels: int) -> dict[str, float]:
    counts = kernels.label_counts(codes, n_labels)
    a = np.ascontiguousarray(codes[:, 0])
    b = np.ascontiguousarray(codes[:, 1])
    return {
        "label_counts": timeit(kernels.label_counts, codes, n_labels),
        "pair_confusion": timeit(kernels.pair_confusion, a, b, n_labels),
        "coincidence_from_counts": timeit(kernels.coincidence_from_counts, counts),
    }


def bench_bootstrap(kernels, data, n_resamples: int) -> float:
    saved = {name: getattr(_backend, name) for name in KERNEL_NAMES}
    try:
        for name in KERNEL_NAMES:
            setattr(_backend, name, getattr(kernels, name))
        start = time.perf_counter()
        bootstrap_ci(data, "alpha", n_resamples=n_resamples, seed=0)
        return time.perf_counter() - start
    finally:
        for name, fn in saved.items():
            setattr(_backend, name, fn)


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--units", type=int, default=20_000)
    parser.add_argument("--annotators", type=int, default=5)
    parser.add_argument("--labels", type=int, default=8)
    parser.add_argument("--coverage", type=float, default=0.8)
    parser.add_argument("--resamples", type=int, default=500)
    args = parser.parse_args()

    spec = SimulationSpec(
        n_units=args.units,
        n_labels=args.labels,
        worker_error_rates=tuple([0.15] * args.annotators),
        coverage=args.coverage,
        seed=0,
    )
    data, _ = generate(spec)
    codes = np.ascontiguousarray(data.grid)
    print(
        f"grid: {codes.shape[0]} units x {codes.shape[1]} annotators, "
        f"{args.labels} labels, coverage {args.coverage}"
    )

    backends = [("python", _pykernels)]
    if _ckernels is not None:
        backends.append(("c", _ckernels))
    else:
        print("compiled extension not available; timing the fallback only")

    rows = {}
    for name, kernels in backends:
        rows[name] = bench_kernels(kernels, codes, args.labels)
        rows[name]["alpha_bootstrap"] = bench_bootstrap(kernels, data, args.resamples)

    header = f"{'kernel':<26}" + "".join(f"{name:>12}" for name, _ in backends)
    if len(backends) == 2:
        header += f"{'speedup':>10}"
    print(header)
    for metric in (*KERNEL_NAMES, "alpha_bootstrap"):
        line = f"{metric:<26}"
        for name, _ in backends:
            line += f"{rows[name][metric] * 1e3:>10.2f}ms"
        if len(backends) == 2:
            line += f"{rows['python'][metric] / rows['c'][metric]:>9.1f}x"
        print(line)


if __name__ == "__main__":
    main()
