"""Smoke test for the kcat_py extension.

Build it first, either with maturin:

    pip install maturin
    maturin build --release -m crates/kcat-py/Cargo.toml && pip install target/wheels/kcat_py-*.whl

or by hand:

    cargo build --release -p kcat-py --features extension-module
    cp target/release/libkcat_py.so python/kcat_py.so
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import kcat_py


def main():
    r = kcat_py.Ring("A1")
    assert r.datum == "A1" and r.rank == 1 and len(r.faces) == 2
    assert r.leq([0], [3])
    assert not r.leq([3], [0])
    assert r.dist([0], [0]) == 0

    # character recursion against the object computed from scratch
    m = r.bott_samelson([0], "[s1]")
    assert m.character() == r.character([0], "[s1]")
    assert len(m.decompose()) == 2
    assert all(status == "pass" for _, status in m.validate())
    assert m.check_compatibility("s0") is None

    q = r.bott_samelson([0])
    assert q.semisimple_dim() == 1
    qs = q.star_bs("s0")
    for d in range(-4, 5):
        assert qs.hom_dim(q, d) == q.hom_dim(qs, d)

    region, table = r.mult_table(2)
    for i, row in enumerate(table):
        assert row[i] == 1
        assert all(x == 0 for x in row[:i])

    ok, cases, witness = r.verify("hecke-axioms")
    assert ok and cases > 0, witness

    try:
        kcat_py.Ring("A1", p=2)
    except ValueError:
        pass
    else:
        raise AssertionError("p = 2 should violate the GKM condition")

    a2 = kcat_py.Ring("A2", p=32003)
    assert len(a2.orbit([0, 0])) == 6
    print("smoke test passed")


if __name__ == "__main__":
    main()
