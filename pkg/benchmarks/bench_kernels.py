"""Compiled vs numpy kernels on the two hot loops.

    python3 benchmarks/bench_kernels.py [--points N] [--oracle-points M] [--repeat R]

Reports the best-of-R wall time per backend and the largest difference
between the two backends' outputs.
"""

import argparse
import time

import numpy as np

from subplanck import kernels
from subplanck.states import StateParams, normalize
from subplanck.wigner_analytic import _kernel_consts
from subplanck.wigner_oracle import _oracle_consts, auto_quadrature


def best_of(repeat, fn):
    times, out = [], None
    for _ in range(repeat):
        t = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--points", type=int, default=200_000)
    ap.add_argument("--oracle-points", type=int, default=20)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    state = normalize(StateParams())
    rng = np.random.default_rng(0)
    pts = rng.uniform(-7.0, 7.0, size=(4, args.points))
    opts = pts[:, : args.oracle_points]
    quad = auto_quadrature(state.params, float(np.max(np.abs(opts[[1, 3]]))))
    t, w = quad.nodes_and_weights()
    wc, oc = _kernel_consts(state), _oracle_consts(state)

    backends = ["python"] + (["compiled"] if kernels.BACKEND == "compiled" else [])
    print(f"threads={kernels.thread_count()} closed-form points={args.points} "
          f"oracle points={args.oracle_points} nodes={quad.nodes}")
    results = {}
    for b in backends:
        tw, vw = best_of(args.repeat, lambda: kernels.wigner_points(*pts, wc, backend=b))
        to, vo = best_of(args.repeat, lambda: kernels.oracle_points(*opts, t, w, oc, backend=b)[0])
        results[b] = (vw, vo)
        print(f"{b:>9}  wigner_points {tw * 1e3:9.2f} ms ({tw / args.points * 1e9:7.1f} ns/pt)"
              f"  oracle_points {to * 1e3:9.2f} ms ({to / args.oracle_points * 1e3:6.2f} ms/pt)")
    if len(results) == 2:
        dw = np.max(np.abs(results["python"][0] - results["compiled"][0]))
        do = np.max(np.abs(results["python"][1] - results["compiled"][1]))
        print(f"max |python - compiled|: wigner {dw:.2e}, oracle {do:.2e}")


if __name__ == "__main__":
    main()
