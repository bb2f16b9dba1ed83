"""Reference values for the UF1-UF7 test problems (CEC 2009, two objectives).

Written directly from the competition definitions, vectorised with numpy and
independent of the Rust code. Prints the cases consumed by
src/problems/tests.rs; rerun and paste if the cases change.

    python3 uf_oracle.py
"""
import numpy as np


def split(n):
    j = np.arange(1, n + 1)
    return j, (j % 2 == 1) & (j > 1), (j % 2 == 0)


def uf(k, x):
    x = np.asarray(x, dtype=float)
    n = len(x)
    j, J1, J2 = split(n)
    x1 = x[0]
    if k in (1, 4, 5, 6, 7):
        y = x - np.sin(6 * np.pi * x1 + j * np.pi / n)
    if k == 1:
        return (x1 + 2 * np.mean(y[J1] ** 2), 1 - np.sqrt(x1) + 2 * np.mean(y[J2] ** 2))
    if k == 2:
        a = 0.3 * x1 ** 2 * np.cos(24 * np.pi * x1 + 4 * j * np.pi / n) + 0.6 * x1
        y = np.where(j % 2 == 1,
                     x - a * np.cos(6 * np.pi * x1 + j * np.pi / n),
                     x - a * np.sin(6 * np.pi * x1 + j * np.pi / n))
        return (x1 + 2 * np.mean(y[J1] ** 2), 1 - np.sqrt(x1) + 2 * np.mean(y[J2] ** 2))
    if k == 3:
        y = x - x1 ** (0.5 * (1 + 3 * (j - 2) / (n - 2)))

        def part(m):
            return 4 * np.sum(y[m] ** 2) - 2 * np.prod(np.cos(20 * y[m] * np.pi / np.sqrt(j[m]))) + 2

        return (x1 + 2 / J1.sum() * part(J1), 1 - np.sqrt(x1) + 2 / J2.sum() * part(J2))
    if k == 4:
        h = np.abs(y) / (1 + np.exp(2 * np.abs(y)))
        return (x1 + 2 * np.mean(h[J1]), 1 - x1 ** 2 + 2 * np.mean(h[J2]))
    if k == 5:
        N, eps = 10, 0.1
        h = 2 * y ** 2 - np.cos(4 * np.pi * y) + 1
        b = (1 / (2 * N) + eps) * abs(np.sin(2 * N * np.pi * x1))
        return (x1 + b + 2 * np.mean(h[J1]), 1 - x1 + b + 2 * np.mean(h[J2]))
    if k == 6:
        N, eps = 2, 0.1
        b = max(0.0, 2 * (1 / (2 * N) + eps) * np.sin(2 * N * np.pi * x1))

        def part(m):
            return 4 * np.sum(y[m] ** 2) - 2 * np.prod(np.cos(20 * y[m] * np.pi / np.sqrt(j[m]))) + 2

        return (x1 + b + 2 / J1.sum() * part(J1), 1 - x1 + b + 2 / J2.sum() * part(J2))
    if k == 7:
        r = x1 ** 0.2
        return (r + 2 * np.mean(y[J1] ** 2), 1 - r + 2 * np.mean(y[J2] ** 2))


def bounds(k, n):
    lo, hi = (np.zeros(n), np.ones(n)) if k == 3 else (np.full(n, -1.0), np.ones(n))
    if k == 4:
        lo, hi = np.full(n, -2.0), np.full(n, 2.0)
    lo[0], hi[0] = 0.0, 1.0
    return lo, hi


def main():
    rng = np.random.default_rng(2009)
    n = 30
    for k in range(1, 8):
        lo, hi = bounds(k, n)
        for _ in range(3):
            # Round inputs so the Rust side can embed them exactly.
            x = np.round(lo + rng.random(n) * (hi - lo), 6)
            f = uf(k, x)
            xs = ", ".join(repr(float(v)) for v in x)
            print(f"    ({k}, [{xs}], [{float(f[0])!r}, {float(f[1])!r}]),")
    # Points on the UF1 Pareto set.
    for x1 in (0.0, 0.09, 0.5, 0.77, 1.0):
        j = np.arange(1, n + 1)
        x = np.sin(6 * np.pi * x1 + j * np.pi / n)
        x[0] = x1
        f = uf(1, x)
        print(f"    // UF1 set x1={x1}: {float(f[0])!r} {float(f[1])!r}")


if __name__ == "__main__":
    main()
