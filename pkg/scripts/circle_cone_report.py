#!/usr/bin/env python3
"""Assemble the de Rham determinants on cones over S^1 and S^2.

Writes the two cone documents next to this script (as CLI-ready JSON)
and prints the per-degree factor breakdown.

    python scripts/circle_cone_report.py
"""

import json
import pathlib

from regsing.cone import ConeSpec, component_report, cone_determinant

HERE = pathlib.Path(__file__).resolve().parent

CIRCLE = {
    "m": 2,
    "ccl_spectra": {"0": [[0.0, 1], [1.0, 2], [4.0, 2]], "1": [[0.0, 1], [4.5, 1]]},
    "harmonic_dims": {"0": 1, "1": 1},
}

SPHERE = {
    "m": 3,
    "ccl_spectra": {
        "0": [[0.0, 1], [2.0, 3], [6.0, 5]],
        "1": [[2.0, 3], [6.0, 5]],
        "2": [[0.0, 1], [4.5, 1]],
    },
    "harmonic_dims": {"0": 1, "1": 0, "2": 1},
}


def report(name: str, doc: dict) -> None:
    path = HERE / f"{name}_cone.json"
    path.write_text(json.dumps(doc, indent=2), encoding="utf-8")
    cone = ConeSpec(
        m=doc["m"],
        ccl_spectra={int(j): tuple(tuple(e) for e in entries) for j, entries in doc["ccl_spectra"].items()},
        harmonic_dims={int(j): d for j, d in doc["harmonic_dims"].items()},
    )
    print(f"\n=== cone over {name} (m = {cone.m}), document at {path.name} ===")
    for k in range(cone.m + 1):
        value = cone_determinant(cone, k)
        factors = component_report(cone, k)
        print(f"degree {k}: det = {value:.12f}")
        for f in factors:
            nu = "" if f.nu is None else f"nu={f.nu:.4f} "
            print(f"    {f.source:<13} {nu}mult={f.multiplicity}  factor={f.value:.12f}")


def main() -> None:
    report("circle", CIRCLE)
    report("sphere", SPHERE)
    print("\nrun the same through the CLI with:")
    print("    regsing cone scripts/circle_cone.json")


if __name__ == "__main__":
    main()
