"""Compare the compiled kernels with the pure-Python reference.

    python3 benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Prints one line per (kernel, shape) with the median time of each backend
and the speedup, after checking that both produce identical output.
"""

import argparse
import random
import statistics
import time

from weightcx import _kernels_py

try:
    from weightcx import _kernels
except ImportError:  # extension not built
    _kernels = None


def _random_int_matrix(rng, m, n, bound, density=0.6):
    return [[rng.randint(-bound, bound) if rng.random() < density else 0 for _ in range(n)] for _ in range(m)]


def _time(fn, make, repeat):
    times = []
    out = None
    for _ in range(repeat):
        args = make()
        t = time.perf_counter()
        out = fn(*args)
        times.append(time.perf_counter() - t)
    return statistics.median(times), out


def bench(repeat, seed):
    rows = []
    cases = [("snf", (m, n)) for m, n in ((6, 6), (10, 10), (14, 12), (20, 20))]
    cases += [("rref_mod", (m, n)) for m, n in ((20, 20), (60, 60), (120, 100))]
    for kernel, (m, n) in cases:
        rng = random.Random(f"{seed}-{kernel}-{m}x{n}")
        if kernel == "snf":
            base = _random_int_matrix(rng, m, n, 3, 0.3)

            def make():
                return [list(r) for r in base], m, n
        else:
            p = 10007
            base = [[rng.randrange(p) for _ in range(n)] for _ in range(m)]

            def make():
                return [list(r) for r in base], m, n, p

        t_py, out_py = _time(getattr(_kernels_py, kernel), make, repeat)
        if _kernels is None:
            rows.append((kernel, m, n, t_py, None, None))
            continue
        try:
            t_cy, out_cy = _time(getattr(_kernels, kernel), make, repeat)
        except OverflowError:
            rows.append((kernel, m, n, t_py, None, "overflow"))
            continue
        if kernel == "rref_mod":
            # compare pivots and the reduced rows
            a1, a2 = make()[0], make()[0]
            same = _kernels_py.rref_mod(a1, m, n, p) == _kernels.rref_mod(a2, m, n, p) and a1 == a2
        else:
            same = out_py == out_cy
        if not same:
            raise SystemExit(f"backends disagree on {kernel} {m}x{n}")
        rows.append((kernel, m, n, t_py, t_cy, t_py / t_cy if t_cy else float("inf")))
    return rows


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    print(f"{'kernel':<10}{'shape':>10}{'python ms':>12}{'cython ms':>12}{'speedup':>10}")
    for kernel, m, n, t_py, t_cy, sp in bench(args.repeat, args.seed):
        cy = f"{t_cy * 1e3:12.3f}" if t_cy is not None else f"{'-':>12}"
        spd = f"{sp:9.1f}x" if isinstance(sp, float) else f"{sp or '-':>10}"
        print(f"{kernel:<10}{f'{m}x{n}':>10}{t_py * 1e3:12.3f}{cy}{spd}")


if __name__ == "__main__":
    main()
