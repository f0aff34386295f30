"""Compare the compiled row reduction kernel against the pure Python twin.

Two views: the raw kernel on random matrices (both backends imported side
by side), and the full exhaustive repair analysis of the longest q=4 code
(one subprocess per backend, since the import picks the kernel once).

Usage: python benchmarks/bench_kernel.py
"""
import os
import random
import subprocess
import sys
import time


def _field_tables(q):
    from mdsrepair.gf import field_of_order

    f = field_of_order(q)
    sub = bytes(f.sub(a, b) for a in range(q) for b in range(q))
    mul = bytes(f.mul(a, b) for a in range(q) for b in range(q))
    inv = bytes([0]) + bytes(f.inv(a) for a in range(1, q))
    return sub, mul, inv


def bench_raw(rounds=3000):
    from mdsrepair._kernel import pure

    try:
        from mdsrepair._kernel import _fast
    except ImportError:
        _fast = None

    rng = random.Random(0)
    cases = []
    for q, rows, cols in ((3, 4, 4), (4, 4, 4), (2, 6, 6), (4, 6, 8)):
        sub, mul, inv = _field_tables(q)
        mats = [
            bytes(rng.randrange(q) for _ in range(rows * cols)) for _ in range(rounds)
        ]
        cases.append((q, rows, cols, sub, mul, inv, mats))

    print(f"raw rre_rank, {rounds} matrices per shape")
    print(f"{'shape':>12} {'pure':>10} {'compiled':>10} {'speedup':>8}")
    for q, rows, cols, sub, mul, inv, mats in cases:
        t0 = time.perf_counter()
        for m in mats:
            pure.rre_rank(bytearray(m), rows, cols, q, sub, mul, inv)
        t_pure = time.perf_counter() - t0
        if _fast is None:
            print(f"{rows}x{cols} q={q:>2} {t_pure:>9.3f}s {'n/a':>10}")
            continue
        t0 = time.perf_counter()
        for m in mats:
            _fast.rre_rank(bytearray(m), rows, cols, q, sub, mul, inv)
        t_fast = time.perf_counter() - t0
        label = f"{rows}x{cols} q={q}"
        print(
            f"{label:>12} {t_pure:>9.3f}s {t_fast:>9.3f}s {t_pure / t_fast:>7.1f}x"
        )


def bench_report():
    # one subprocess per backend; the child prints its elapsed seconds
    snippet = (
        "import time; "
        "from mdsrepair.constructions import build_two_parity_code; "
        "from mdsrepair.repair import repair_report; "
        "code, _, _ = build_two_parity_code(4, 2, 17); "
        "t0 = time.perf_counter(); "
        "rep = repair_report(code, budget=1000); "
        "assert rep.exhaustive and rep.beta_max == 27; "
        "print(time.perf_counter() - t0)"
    )
    times = {}
    for label, force in (("compiled", "0"), ("pure", "1")):
        env = dict(os.environ, MDSREPAIR_PURE_KERNEL=force)
        out = subprocess.run(
            [sys.executable, "-c", snippet], env=env, capture_output=True, text=True
        )
        if out.returncode != 0:
            print(f"{label} run failed:\n{out.stderr}", file=sys.stderr)
            continue
        times[label] = float(out.stdout.strip())
    print("\nexhaustive repair analysis, q=4 n=17 (357 candidate scan)")
    for label, secs in times.items():
        print(f"{label:>12} {secs:>9.3f}s")
    if len(times) == 2:
        print(f"{'speedup':>12} {times['pure'] / times['compiled']:>8.1f}x")


if __name__ == "__main__":
    from mdsrepair import BACKEND

    print(f"active backend: {BACKEND}\n")
    bench_raw()
    bench_report()
