"""Render the two basins for b = 2, 3, 4 and sample J(f) by inverse iteration."""
import sys
from pathlib import Path

import numpy as np

from renorm_julia import MapParams
from renorm_julia.julia_render import RasterSpec, inverse_iteration_cloud, render_raster

out = Path(sys.argv[1] if len(sys.argv) > 1 else ".")
spec = RasterSpec(0j, 3.0, 512)
for b in (2, 3, 4):
    path = out / f"julia_b{b}.ppm"
    counts = render_raster(MapParams(b), spec, path, jobs=4)
    print(path, counts)

cloud = inverse_iteration_cloud(MapParams(3), 50_000, seed=1)
print("\ncloud of J(f), b=3: |t| range", np.abs(cloud).min(), np.abs(cloud).max())
