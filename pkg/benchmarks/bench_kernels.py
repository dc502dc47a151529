"""Benchmark the compiled kernels against the numpy fallback.

Run from the repository root after building the extension in place:

    python3 setup.py build_ext --inplace
    python3 benchmarks/bench_kernels.py

The workloads mirror the package's hot paths: single-state expectation
evaluation at classifier dimensions, projector accumulation as done by
training, and batched outcome drawing as done by the sampler.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from qperceptron._kernels import pure

try:
    from qperceptron._kernels import _ckernels
except ImportError:
    _ckernels = None


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_expectation(impl, dim: int, calls: int):
    rng = np.random.default_rng(1)
    a = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    op = (a + a.conj().T) / 2
    state = rng.standard_normal(dim) + 1j * rng.standard_normal(dim)
    state /= np.linalg.norm(state)

    def run():
        for _ in range(calls):
            impl.expectation(op, state)

    return run


def bench_accumulate(impl, dim: int, samples: int):
    rng = np.random.default_rng(2)
    states = rng.standard_normal((samples, dim)) + 1j * rng.standard_normal((samples, dim))
    states /= np.linalg.norm(states, axis=1, keepdims=True)
    acc = np.zeros((dim, dim), dtype=np.complex128)

    def run():
        acc.fill(0)
        for s in states:
            impl.accumulate_outer(acc, s, 1.0)

    return run


def bench_draw(impl, draws: int):
    rng = np.random.default_rng(3)
    cum = np.cumsum(np.array([0.7, 0.2, 0.1]))
    uniforms = rng.random(draws)

    def run():
        impl.draw_outcomes(cum, uniforms)

    return run


WORKLOADS = [
    ("expectation dim=4 x 20k", lambda impl: bench_expectation(impl, 4, 20_000)),
    ("expectation dim=16 x 20k", lambda impl: bench_expectation(impl, 16, 20_000)),
    ("expectation dim=64 x 5k", lambda impl: bench_expectation(impl, 64, 5_000)),
    ("accumulate dim=16 x 10k", lambda impl: bench_accumulate(impl, 16, 10_000)),
    ("draw_outcomes 1e6", lambda impl: bench_draw(impl, 1_000_000)),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=5,
                        help="repetitions per workload; best time is kept")
    args = parser.parse_args()

    if _ckernels is None:
        print("compiled kernels are not built; benchmarking the fallback only")

    header = f"{'workload':28s} {'pure':>10s}"
    if _ckernels is not None:
        header += f" {'compiled':>10s} {'speedup':>8s}"
    print(header)
    print("-" * len(header))

    for name, factory in WORKLOADS:
        t_pure = _time(factory(pure), args.repeat)
        line = f"{name:28s} {t_pure * 1e3:9.2f}ms"
        if _ckernels is not None:
            t_c = _time(factory(_ckernels), args.repeat)
            line += f" {t_c * 1e3:9.2f}ms {t_pure / t_c:7.1f}x"
        print(line)
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
