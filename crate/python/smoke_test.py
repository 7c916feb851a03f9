"""Smoke test for the pyvircat extension module.

Build with `cargo build --release -p vircat-py` and copy
target/release/libpyvircat.so to python/pyvircat.so, or set PYTHONPATH
to a directory holding it.
"""

import json
import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import pyvircat  # noqa: E402


def main() -> None:
    labels, n = pyvircat.fusion_rules(3)
    assert len(labels) == 3
    assert sum(n[1][1]) == 2

    dims = pyvircat.quantum_dimensions(3)
    assert abs(dims[1] - math.sqrt(2)) < 1e-9

    found = pyvircat.invariants(11)
    assert ("(A_10, E_6)", "I") in found, found

    data = json.loads(pyvircat.modular_data(4))
    assert len(data["labels"]) == 6

    assert abs(pyvircat.sixj(3, 0, 0, 0, 0, 0, 0) - 1.0) < 1e-12

    code, out, _ = pyvircat.run(["invariants", "--m", "999", "--no-cache"])
    assert code == 2
    code, out, _ = pyvircat.run(["invariants", "--m", "6", "--no-cache"])
    assert code == 0 and json.loads(out)["m"] == 6

    planted = {f"{a},{b},{a ^ b}": [(-1.0 if (a & 1) and (b & 2) else 1.0), 0.0] for a in range(4) for b in range(4)}
    assert not pyvircat.group_cocycle_trivial("2x2", json.dumps(planted))
    ones = {key: [1.0, 0.0] for key in planted}
    assert pyvircat.group_cocycle_trivial("2x2", json.dumps(ones))
    print("smoke test passed")


if __name__ == "__main__":
    main()
