"""Smoke test for the natopt_py extension.

    cargo build --release -p natopt-py --features extension-module
    cp target/release/libnatopt_py.so python/natopt_py.so
    python3 python/smoke_test.py
"""

import math
import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import natopt_py as nt


def main():
    ranked = nt.recommend(["route-finding", "combinatorial-permutation", "team-search"])
    first_impl = next(r for r in ranked if r["implemented"])
    assert first_impl["name"] == "Ant Colony optimization", first_impl

    assert nt.lookup("FOA")["name"] == "Fruit fly optimization algorithm"
    assert len(nt.taxonomy_ls("NonBiology/Gravity")) == 3

    value, items = nt.knapsack_solve([10.0], [5], 5)
    assert value == 10.0 and items == [0]
    dp, _ = nt.knapsack_solve([6, 10, 12], [1, 2, 3], 5)
    ga, _ = nt.knapsack_solve([6, 10, 12], [1, 2, 3], 5, algo="ga", evals=2000)
    assert dp == ga == 22.0

    square = [(0, 0), (1, 0), (1, 1), (0, 1)]
    for algo in ("brute", "bnb", "aco"):
        length, tour = nt.tsp_solve(square, algo=algo, seed=3)
        assert abs(length - 4.0) < 1e-9, (algo, length)
        assert sorted(tour) == [0, 1, 2, 3]

    series = [(10 + t) * (1.2 if t % 4 == 0 else 0.9) for t in range(24)]
    grid = nt.hw_fit(series, 4, algo="grid")
    foa = nt.hw_fit(series, 4, algo="foa", seed=1)
    assert foa["sse"] <= 1.10 * grid["sse"] + 1e-12

    res = nt.minimize(lambda x: sum(v * v for v in x), [(-5, 5), (-5, 5)], algo="ba", seed=2)
    assert res["best_fitness"] < 1e-3 and res["evaluations"] <= 10_000
    again = nt.minimize(lambda x: sum(v * v for v in x), [(-5, 5), (-5, 5)], algo="ba", seed=2)
    assert again["history"] == res["history"]

    try:
        nt.minimize(lambda x: 1 / 0, [(0, 1)])
    except ZeroDivisionError:
        pass
    else:
        raise AssertionError("callable errors must propagate")

    assert nt.gen_knapsack(10, seed=4) == nt.gen_knapsack(10, seed=4)
    assert nt.gen_tsp(6, seed=1, metric_name="manhattan").startswith("NAME")
    assert nt.bench_ga_vs_dp([10], reps=1, evals=500).splitlines()[0] == "n,algorithm,median_ms,best_value,optimum,ratio"
    assert math.isfinite(grid["alpha"])
    print("python smoke test ok")


if __name__ == "__main__":
    main()
