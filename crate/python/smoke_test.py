#!/usr/bin/env python3
"""Builds the cryvol extension module in place and exercises its surface.

Usage: python3 python/smoke_test.py
"""

import pathlib
import shutil
import subprocess
import sys
from fractions import Fraction

ROOT = pathlib.Path(__file__).resolve().parents[1]


def build_extension() -> pathlib.Path:
    subprocess.run(
        ["cargo", "build", "--release", "-p", "cryvol-py"],
        cwd=ROOT,
        check=True,
    )
    built = ROOT / "target" / "release" / "libcryvol_py.so"
    if not built.exists():  # macOS
        built = ROOT / "target" / "release" / "libcryvol_py.dylib"
    dest = pathlib.Path(__file__).parent / "cryvol.so"
    shutil.copy2(built, dest)
    return dest


def main() -> None:
    dest = build_extension()
    sys.path.insert(0, str(dest.parent))
    import cryvol

    # Exact counts on the demonstration graphs.
    fig1 = cryvol.Graph.fig1()
    assert cryvol.kpf(fig1, [1, 3, -2]) == 3
    assert len(cryvol.enumerate_flows(fig1, [1, 3, -2])) == 3
    assert cryvol.polytope_dimension(fig1, [1, 3, -2]) == 2

    fig2 = cryvol.Graph.fig2()
    assert cryvol.kdyn(fig2, [2, 1, 1]) == 17
    assert cryvol.kdyn_via_series(fig2, [2, 1, 1]) == 17

    # Volumes of the three families by independent routes.
    k5 = cryvol.Graph.complete(5)
    assert cryvol.normalized_volume_ehrhart(k5, [1, 0, 0, 0, -1]) == 2
    assert cryvol.cry_volume_formula(4) == 2

    d3 = cryvol.Graph.complete_signed(3)
    assert cryvol.normalized_volume_ehrhart(d3, [2, 0, 0]) == 2
    assert cryvol.volume_via_dynamic_kpf(d3) == 2
    assert cryvol.cryd_volume_formula(2) == 2

    c3 = cryvol.Graph.complete_signed_with_loops(3)
    assert cryvol.normalized_volume_ehrhart(c3, [2, 0, 0]) == 4
    assert cryvol.volume_via_reduction(c3, [2, 0, 0]) == 4
    assert cryvol.kdyn(c3, [0, 0, 1]) == 4
    assert cryvol.cryc_volume_formula(2) == 4

    # Graph model details.
    assert c3.edge_count == 9
    assert c3.indegree(3) == 2
    assert c3.incidence_matrix()[0] == [2, 0, 0]
    round_trip = cryvol.Graph.from_json(c3.to_json())
    assert round_trip.edges() == c3.edges()

    fam = cryvol.Graph.family([0, 0, 1])
    assert fam.indegree(3) == 2
    assert cryvol.volume_via_dynamic_kpf(fam) >= 1

    # The correspondence between family flows and complete-graph flows.
    assert cryvol.bijection_totals(3) == (4, 4)

    # Exact identities and constant terms.
    assert cryvol.catalan(5) == 42
    assert cryvol.morris_rhs(2, 2, 0, 1) == Fraction(2)
    assert cryvol.morris_c_rhs(2, 2, 1, 1) == Fraction(128)
    assert cryvol.ct_eval("CT[x1] x1^-1 * (1 - x1)^-2 * (1 - 2*x1)^-1") == Fraction(4)
    lhs, rhs, equal = cryvol.verify_identity("cryc", 2)
    assert equal and lhs == rhs == Fraction(4)
    lhs, rhs, equal = cryvol.verify_identity("morris", 2, a=1, b=1, two_c=1)
    assert equal

    # The counterexample graph is rejected by the dynamic volume route.
    bad = cryvol.Graph.loop_counterexample()
    try:
        cryvol.volume_via_dynamic_kpf(bad)
    except ValueError:
        pass
    else:
        raise AssertionError("loop graph must be rejected")

    print("smoke test passed")


if __name__ == "__main__":
    main()
