#!/usr/bin/env python3
"""Writes a small separable two-class CSV for trying out the CLI."""
import random
import sys

out = sys.argv[1] if len(sys.argv) > 1 else "demo.csv"
n_per_class = int(sys.argv[2]) if len(sys.argv) > 2 else 2000
random.seed(0)

with open(out, "w") as f:
    f.write("income,debt,age,outcome\n")
    for i in range(2 * n_per_class):
        cls = i % 2
        c = 1.3 if cls else -1.3
        f.write(
            f"{c + random.gauss(0, 1):.6f},{c + random.gauss(0, 1):.6f},"
            f"{random.gauss(40, 10):.4f},{'default' if cls else 'paid'}\n"
        )
print(f"wrote {2 * n_per_class} rows to {out}")
