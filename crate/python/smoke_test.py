"""Smoke test for the dyncolor_py extension.

Build the module first, e.g. `maturin develop -m crates/python/Cargo.toml`,
or `cargo build -p dyncolor-py --release` and copy
`target/release/libdyncolor_py.so` to `dyncolor_py.so` on PYTHONPATH.
"""

import json
import random

import dyncolor_py as dc


def proper_after_random_updates():
    n = 300
    c = dc.Colorer(n, k=2, seed=5, policy="rand")
    rng = random.Random(1)
    present = set()
    for _ in range(2000):
        a, b = rng.randrange(n), rng.randrange(n)
        if a == b:
            continue
        e = (min(a, b), max(a, b))
        if e in present:
            c.delete(*e)
            present.remove(e)
        else:
            c.insert(*e)
            present.add(e)
    assert c.edge_count == len(present)
    for v in range(n):
        c.color(v)
    colors = c.colors()
    assert all(x is not None for x in colors)
    assert dc.verify_proper(c.edges(), colors) == []
    q = c.query(0)
    assert q["color"] == colors[0] and q["vstar_size"] == 0


def errors_raise_value_error():
    c = dc.Colorer(3)
    c.insert(0, 1)
    for bad in (lambda: c.insert(0, 1), lambda: c.delete(1, 2), lambda: c.color(9)):
        try:
            bad()
        except ValueError:
            continue
        raise AssertionError("expected ValueError")


def oracles_and_harness():
    order, degen = dc.degeneracy(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert degen == 3 and sorted(order) == [0, 1, 2, 3]
    exp = dc.coin_experiment(2, 200_000, seed=3)
    assert len(exp["counts"]) == 12 and exp["max_abs_deviation"] < 0.005
    text = dc.generate("gnm", 200, seed=2, m=600)
    report = [json.loads(line) for line in dc.run_workload(text, policy="rand", partition=2, strict=True).splitlines()]
    summary = report[-1]
    assert summary["type"] == "summary"
    assert summary["conflicts"] == 0 and summary["invariant_violations"] == 0
    assert dc.choose_k(40, 1024) == 4


if __name__ == "__main__":
    proper_after_random_updates()
    errors_raise_value_error()
    oracles_and_harness()
    print("ok")
