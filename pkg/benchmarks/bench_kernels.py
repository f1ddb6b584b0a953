"""Time the compiled kernels against the pure-Python fallback.

    python3 benchmarks/bench_kernels.py [--n 60] [--repeat 5]
"""
import argparse
import random
import timeit

from giso import _purepy

try:
    from giso import _speedups
except ImportError:
    _speedups = None


def workloads(n, rng):
    perms = [tuple(rng.sample(range(n), n)) for _ in range(3)]
    x = tuple(rng.randrange(4) for _ in range(n))
    colors = [rng.randrange(5) for _ in range(n * n)]
    y = _purepy.act_string(x, perms[0])
    m = max(8, n // 3)
    small = [tuple(rng.sample(range(m), m)) for _ in range(2)]
    return {
        "compose": lambda k: k.compose(perms[0], perms[1]),
        "invert": lambda k: k.invert(perms[0]),
        "orbit_labels": lambda k: k.orbit_labels(perms, n),
        "pair_orbit_labels": lambda k: k.pair_orbit_labels(small, m),
        "act_string": lambda k: k.act_string(x, perms[0]),
        "maps_string": lambda k: k.maps_string(x, y, perms[0]),
        "wl_signatures": lambda k: k.wl_signatures(colors, n // 3, 5),
    }


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--n", type=int, default=60)
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    rng = random.Random(0)
    backends = [("python", _purepy)] + ([("compiled", _speedups)] if _speedups else [])
    print(f"{'kernel':<20}" + "".join(f"{name:>14}" for name, _ in backends) + "  speedup")
    for name, fn in workloads(args.n, rng).items():
        times = []
        for _, mod in backends:
            number = 200
            best = min(timeit.repeat(lambda: fn(mod), number=number, repeat=args.repeat)) / number
            times.append(best)
        ratio = f"{times[0] / times[1]:8.1f}x" if len(times) == 2 else "       -"
        print(f"{name:<20}" + "".join(f"{t * 1e6:12.1f}us" for t in times) + ratio)


if __name__ == "__main__":
    main()
