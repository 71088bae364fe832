"""Time the numba and numpy product kernels on dense and sparse operands.

    python3 benchmarks/bench_product.py [--repeat 200]
"""
import argparse
import timeit

import numpy as np

from gausscalc import _accel


def operands(dim, kind, rng):
    n = 1 << dim
    a, b = rng.normal(size=n), rng.normal(size=n)
    if kind == "vector*mv":
        mask = np.array([bin(i).count("1") == 1 for i in range(n)])
        a = np.where(mask, a, 0.0)
    elif kind == "bivector*blade":
        a = np.where([bin(i).count("1") == 2 for i in range(n)], a, 0.0)
        b = np.zeros(n)
        b[(1 << (dim // 2)) - 1] = 1.0
    return a, b


def main(argv=None):
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--repeat", type=int, default=200)
    p.add_argument("--dims", default="3,4,5,6,7,8")
    args = p.parse_args(argv)
    rng = np.random.default_rng(0)

    if not _accel.HAS_NUMBA:
        print("numba not installed; only the numpy kernel is available")
        return
    _accel.product_numba(np.ones(8), np.ones(8), _accel.GEOMETRIC)  # compile outside the timing

    print(f"{'N':>2} {'operands':>15} {'numba us':>10} {'numpy us':>10} {'speedup':>8}")
    for dim in (int(d) for d in args.dims.split(",")):
        for kind in ("dense", "vector*mv", "bivector*blade"):
            a, b = operands(dim, kind, rng)
            assert np.allclose(_accel.product_numba(a, b, 0), _accel.product_numpy(a, b, 0))
            t_nb = min(timeit.repeat(lambda: _accel.product_numba(a, b, 0), number=args.repeat, repeat=3))
            t_np = min(timeit.repeat(lambda: _accel.product_numpy(a, b, 0), number=args.repeat, repeat=3))
            us_nb, us_np = 1e6 * t_nb / args.repeat, 1e6 * t_np / args.repeat
            print(f"{dim:>2} {kind:>15} {us_nb:10.2f} {us_np:10.2f} {us_np / us_nb:8.1f}x")


if __name__ == "__main__":
    main()
