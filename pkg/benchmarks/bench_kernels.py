"""Time the numba kernels against their numpy fallbacks.

    python benchmarks/bench_kernels.py --repeat 5

The numba timings exclude the first (compiling) call. Each pair of results
is also checked for agreement before timing is reported.
"""

import argparse
import time

import numpy as np

from spheredeg import kernels
from spheredeg.constructors import build_alpha
from spheredeg.mesh import build_mesh


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        times.append(time.perf_counter() - t0)
    return min(times)


def cases(seed):
    rng = np.random.default_rng(seed)
    for n, level, m in [(2, 6, 3), (3, 4, 2), (3, 5, -2)]:
        mesh = build_mesh(n, level)
        fld = build_alpha(n, m).realized_field
        coeffs, exps, comp = fld._packed
        vals = fld.evaluate(mesh.vertices)
        images = (vals / np.linalg.norm(vals, axis=1, keepdims=True))[mesh.simplices]
        target = rng.normal(size=n + 1)
        target /= np.linalg.norm(target)
        label = f"S^{n} level {level} ({len(mesh.simplices)} simplices)"
        yield f"poly_eval     {label}", lambda b, f=(coeffs, exps, comp, n + 1, mesh.vertices): \
            kernels.poly_eval(*f, backend=b)
        yield f"max_diameter  {label}", lambda b, im=images: kernels.max_simplex_diameter(im, backend=b)
        yield f"coverage      {label}", lambda b, im=images, t=target: kernels.signed_coverage(im, t, backend=b)


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'kernel':<58}{'numpy [s]':>12}{'numba [s]':>12}{'speedup':>10}")
    for label, call in cases(args.seed):
        a, b = call("numpy"), call("numba")  # warm-up, compiles the numba path
        if isinstance(a, tuple):
            assert a[:3] == b[:3], label
        else:
            assert np.allclose(a, b), label
        t_np = best_of(lambda: call("numpy"), args.repeat)
        t_nb = best_of(lambda: call("numba"), args.repeat)
        print(f"{label:<58}{t_np:>12.5f}{t_nb:>12.5f}{t_np / t_nb:>9.1f}x")


if __name__ == "__main__":
    main()
