"""
Peering cost grows with log d
=============================

Peering looks each pattern label up in a sorted index of data labels, so
the number of key comparisons per pattern node should grow like the
logarithm of the data size.  The benchmark instances use one label per
eight data nodes.
"""

import math

import numpy as np

from assist.cli import bench_instance
from assist.peering import build_label_index, peer_all

p = 20
rows = []
for k in (8, 10, 12, 14):
    d = 2 ** k
    pair = bench_instance(d, p, seed=0)
    pm = peer_all(pair.pattern, build_label_index(pair.data))
    rows.append((d, pm.comparisons / p))
    print(f"d = {d:6d}   comparisons per pattern node = {pm.comparisons / p:5.2f}   "
          f"log2 d = {math.log2(d):4.1f}")

x = np.log2([d for d, _ in rows])
y = np.array([c for _, c in rows])
slope, intercept = np.polyfit(x, y, 1)
print(f"\nfit: {slope:.2f} * log2(d) + {intercept:.2f}")
