"""Smoke test for the `sysmap` extension module.

Build and run from the workspace root:

    cargo build -p sysmap-py --release --features extension-module
    cp target/release/libsysmap.so python/sysmap.so
    python3 python/smoke_test.py
"""

import math
import sys

import sysmap


def main() -> int:
    assert sysmap.cover_invariants(2, 3, 4) == (8, 12)
    assert sysmap.euler_characteristic(8, 12) == -26

    w = sysmap.collar_width(2 * math.asinh(1))
    assert abs(w - math.asinh(1)) < 1e-12
    n = sysmap.collar_constant(ray=(2, 3))
    assert 1021 < n < 1023, n

    base = sysmap.transition_matrix_base(2, 3, 4)
    assert max(base.column_sums()) <= 16 * 4 + 9
    enc = sysmap.spectral_radius(base)
    assert enc["lower"] <= enc["upper"] <= 73

    root = sysmap.lifted_root_matrix(2, 3, 4)
    assert root.dim == 28
    again = sysmap.Matrix.from_json(root.to_json())
    assert again == root
    assert sysmap.mixing_number(sysmap.lifted_root_matrix(1, 1, 2), 10) is not None

    lb = sysmap.k_lower_bound_ray(2, 3, 8)
    assert lb["value"] > 0

    rows = sysmap.sandwich_table([4, 5], ray=(2, 3))
    assert [r["index"] for r in rows] == [4, 5]
    csv = sysmap.sandwich_table_csv([4], ray=(2, 3))
    assert csv.splitlines()[0] == ",".join(sysmap.CSV_HEADER)

    try:
        sysmap.transition_matrix_base(2, 4, 1)
    except sysmap.PreconditionError:
        pass
    else:
        raise AssertionError("non-coprime ray accepted")

    print("sysmap smoke test: ok")
    return 0


if __name__ == "__main__":
    sys.exit(main())
