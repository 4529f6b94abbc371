#!/usr/bin/env python3
"""Generate the full triptych: torus, Klein bottle and Roman surface STLs.

Writes one binary STL per surface and prints the validation report for each.
Default parameters produce ~300 MB files; pass --draft for quick small models.
"""

import argparse
import gc
import os
import time

from identispace.geom import SurfaceKind, SurfaceParams
from identispace.mesh_io import validate, write_stl
from identispace.wireframe import WireframeSpec, build_wireframe


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--output-dir", default=".", help="directory for the STL files")
    parser.add_argument(
        "--draft",
        action="store_true",
        help="small fast models (coarser grid, densities and tessellation)",
    )
    args = parser.parse_args()
    os.makedirs(args.output_dir, exist_ok=True)

    for kind in SurfaceKind:
        start = time.perf_counter()
        if args.draft:
            surface = SurfaceParams(kind, lat_ribs=8, long_ribs=16)
            spec = WireframeSpec(surface, outer_density=2, inner_density=2,
                                 capsule_resolution=8)
        else:
            spec = WireframeSpec(SurfaceParams(kind))
        mesh = build_wireframe(spec)
        report = validate(mesh)
        path = os.path.join(args.output_dir, f"{kind.value}.stl")
        with open(path, "wb") as fh:
            fh.write(write_stl(mesh))
        print(f"== {kind.value} -> {path} [{time.perf_counter() - start:.1f}s]")
        for line in report.summary_lines():
            print(f"   {line}")
        del mesh
        gc.collect()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
