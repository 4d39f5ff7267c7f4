"""Time the grid-oracle kernels: numba vs numpy on every element of Γ."""

import argparse
import time

import numpy as np

from g2mirror import _kernels
from g2mirror.joycebv import joyce_gamma
from g2mirror.torusact import fixed_set, grid_fixed_mask, grid_subtorus_mask


def run(backend: str, q: int):
    G = joyce_gamma()
    masks = []
    for g in G:
        masks.append(grid_fixed_mask(g, q, backend))
        for c in fixed_set(g):
            masks.append(grid_subtorus_mask(c, q, backend))
    return masks


def bench(backend: str, q: int, repeat: int) -> tuple[float, list]:
    masks = run(backend, q)  # warm-up (JIT compile)
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        masks = run(backend, q)
        best = min(best, time.perf_counter() - t0)
    return best, masks


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, default=6, help="grid denominator (q^7 points per mask)")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = ["numpy"] + (["numba"] if _kernels.HAVE_NUMBA else [])
    results = {b: bench(b, args.q, args.repeat) for b in backends}
    print(f"grid {args.q}^7 = {args.q ** 7} points, {len(results['numpy'][1])} masks per run")
    for b, (t, _) in results.items():
        print(f"  {b:6s} best of {args.repeat}: {t * 1e3:9.2f} ms")
    if "numba" in results:
        same = all(np.array_equal(x, y) for x, y in zip(results["numpy"][1], results["numba"][1]))
        print(f"  speedup numba/numpy: {results['numpy'][0] / results['numba'][0]:.2f}x")
        print(f"identical masks: {same}")


if __name__ == "__main__":
    main()
