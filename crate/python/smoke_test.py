"""Smoke test for the einstein_gap extension module.

Build the extension first:

    cargo build --release -p einstein-gap-python

then run `python3 python/smoke_test.py`. Set EINSTEIN_GAP_LIB to load a
shared library from somewhere other than target/release.
"""

import importlib.machinery
import importlib.util
import math
import os
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent


def load():
    try:
        import einstein_gap  # installed, e.g. by maturin

        return einstein_gap
    except ImportError:
        pass
    default = ROOT / "target" / "release" / (
        "einstein_gap.dll" if sys.platform == "win32" else
        "libeinstein_gap.dylib" if sys.platform == "darwin" else
        "libeinstein_gap.so"
    )
    path = Path(os.environ.get("EINSTEIN_GAP_LIB", default))
    if not path.exists():
        sys.exit(f"extension not found at {path}; build it with "
                 "`cargo build --release -p einstein-gap-python`")
    loader = importlib.machinery.ExtensionFileLoader("einstein_gap", str(path))
    spec = importlib.util.spec_from_file_location("einstein_gap", path, loader=loader)
    module = importlib.util.module_from_spec(spec)
    loader.exec_module(module)
    return module


def main():
    eg = load()

    quintic = eg.CharNumbers(55, -35)
    assert quintic.c1sq() == 5
    blown = quintic.blow_up(4)
    assert (blown.chi, blown.tau) == (59, -39)
    assert blown == eg.CharNumbers(59, -39)
    assert quintic.betti() == (9, 44)
    assert blown.hitchin_thorpe()["verdict"] == "StrictlySatisfied"
    assert eg.hitchin_thorpe_status(24, -16)["verdict"] == "Equality"

    assert eg.einstein_obstructed(3, 2)["obstructed"]
    assert not eg.einstein_obstructed(6, 3)["obstructed"]
    assert list(eg.admissible_k_range(5)) == [4]

    bound = eg.sw_lower_bound(59, -39, 4)
    assert bound["multiplier"] == 5
    assert math.isclose(bound["value"], 5 * 32 * math.pi ** 2)
    try:
        eg.sw_lower_bound(25, -17, 1)
    except ValueError:
        pass
    else:
        raise AssertionError("blown-up K3 should be rejected")

    rows = eg.fermat_family_catalog(20)
    assert [r["c1sq"] for r in rows[:3]] == [5, 24, 63]
    assert all(r["obstructed"] and r["ht_margin"] > 0 for r in rows)
    assert eg.catalog_csv(2).splitlines()[0].startswith("j,m,chi_X,tau_X")

    sweep = eg.lattice_verify(5, 9, 44, 4, trials=200, boost_scale=1.0)
    assert sweep["violations"] == 0 and sweep["inconsistencies"] == 0
    flat = eg.lattice_verify(5, 9, 44, 4, trials=10, boost_scale=0.0)
    assert flat["equality_candidates"] == 10

    report = eg.glue_lab(t_grid=[0.2, 0.1, 0.05, 0.025])
    exps = report["exponents"]
    assert abs(exps["norm0"] - 2) < 0.3 and abs(exps["norm1"] - 1) < 0.3
    assert exps["annulus_integral"] >= 3.5
    assert report["passed"], report["checks"]

    print("einstein_gap smoke test passed")


if __name__ == "__main__":
    main()
