"""Smoke test for the feeder extension module.

    pip install --no-build-isolation .
    python python/smoke_test.py
"""

import math
import pathlib

import feeder

ROOT = pathlib.Path(__file__).resolve().parent.parent


def close(a, b, tol=1e-9):
    return abs(a - b) <= tol * max(1.0, abs(a), abs(b))


def main():
    g1 = feeder.Instance.load(ROOT / "data" / "g1.json")
    assert g1.nodes == ["A", "I"] and g1.interchange == "I"
    assert g1.cost_factor == 2.5

    fi = feeder.FeedIn(g1)
    assert fi.routes() == ["A>I", "I>A>I"]
    stats = fi.pruning_stats()
    assert stats["total"] == 2, stats

    sol = fi.solve()
    assert sol["status"] == "optimal" and close(sol["objective"], 20.0), sol
    assert sol["all_passed"], sol["checks"]
    assert close(fi.solve("full")["objective"], 20.0)

    objs = [fi.solve_supply_opt(s)["objective"] for s in (0.0, 5.0, 10.0, 20.0)]
    assert all(close(a, b) for a, b in zip(objs, [0.0, 10.0, 20.0, 20.0])), objs
    assert close(fi.absolute_max_profit(), 20.0)

    fo = feeder.FeedOut(g1)
    direct = fo.solve(10.0)
    via = fo.solve(10.0, via_equivalence=True)
    assert direct["all_passed"] and via["all_passed"]
    assert close(direct["objective"], 20.0) and close(direct["objective"], via["objective"], 1e-6)

    assert close(feeder.reference_objective(g1, "feed-in"), 20.0)

    lp = feeder.solve_lp("Maximize\n obj: 3 x + 2 y\nSubject To\n c1: x + y <= 4\n c2: x + 3 y <= 6\n x <= 3\nEnd\n")
    assert lp["status"] == "optimal" and close(lp["objective"], 11.0), lp

    bad = feeder.solve_lp("Maximize\n obj: x\nSubject To\n c1: x <= 1\n c2: x >= 2\nEnd\n")
    assert bad["status"] == "infeasible" and math.isnan(bad["objective"])

    a = feeder.Instance.generate(7, nodes=5)
    assert a.to_json() == feeder.Instance.generate(7, nodes=5).to_json()
    again = feeder.Instance.from_json(a.to_json())
    full = feeder.FeedIn(again).solve("full")["objective"]
    reduced = feeder.FeedIn(again).solve("reduced")["objective"]
    assert close(full, reduced, 1e-8), (full, reduced)

    try:
        feeder.Instance.from_json('{"nodes": []}')
    except ValueError:
        pass
    else:
        raise AssertionError("invalid instance accepted")

    print("smoke test passed")


if __name__ == "__main__":
    main()
