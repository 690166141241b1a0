"""Smoke test for the polarium_py extension.

Build it first, e.g.
    cargo build --release -p polarium-py --features extension-module
    cp target/release/libpolarium_py.so python/polarium_py.so
"""

import os
import sys

sys.path.insert(0, os.path.dirname(os.path.abspath(__file__)))

import polarium_py as pp


def main():
    f = pp.Field(4)
    assert (f.order, f.characteristic, f.degree) == (4, 2, 2)
    assert all(f.mul(a, f.inv(a)) == 1 for a in range(1, 4))
    assert all(f.conj(f.conj(a)) == a for a in range(4))

    w = pp.Space("W(3,2)")
    assert (w.num_points, w.num_lines, w.rank, w.order) == (15, 15, 2, (2, 2))
    assert len(w.perp([0])) == 7
    b = next(p for p in range(1, 15) if not w.collinear(0, p))
    assert len(w.hyperbolic_line(0, b)) == 3

    report = w.check()
    assert all(r["verdict"] == "holds" for r in report["properties"].values())
    assert all(e["holds"] for e in report["equivalences"])

    q = pp.Space("Q-(5,2)")
    r = q.check(props=["A", "B_triads"])
    assert r["properties"]["A"]["verdict"] == "fails"
    assert r["properties"]["A"]["witness"]["kind"] == "A"
    assert r["properties"]["B_triads"]["verdict"] == "holds"

    d = pp.Space("dual(H(4,4))")
    assert (len(d), d.order) == (297, (8, 4))

    try:
        pp.Space("W(4,2)")
    except ValueError:
        pass
    else:
        raise AssertionError("odd symplectic dimension accepted")
    print("polarium_py smoke test passed")


if __name__ == "__main__":
    main()
