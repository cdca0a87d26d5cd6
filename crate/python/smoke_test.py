"""Smoke test for the slowfast Python extension.

Build and install first:

    pip install maturin
    maturin build --release -m crates/py/Cargo.toml
    pip install target/wheels/slowfast-*.whl
"""

import math

import slowfast


def main():
    m = slowfast.Model.lienard(0, 1.0)
    assert m.contact_order == 2
    assert m.orientation(1e-3) == "exit-solved"
    w, a = m.omega_limit(0.01), m.alpha_limit(0.01)
    assert a < 0 < w

    seq = slowfast.generate_sequence(m, 0.001, 100)
    assert seq.iterations == 100 and len(seq) == 101
    h = seq.heights
    assert all(x > y for x, y in zip(h, h[1:]))
    cahen = seq.dimension("cahen")
    assert abs(cahen - 0.330445) < 5e-6, cahen
    value, trace = seq.estimate("borel")
    assert trace[0][0] == 2 and 0.0 <= value <= 1.0

    nf = slowfast.Model.normal_form(n=2, m=1, j=10)
    s = slowfast.generate_sequence(nf, 0.1, 2000)
    tail = s.dimension("tailnucleus")
    assert abs(tail - slowfast.theoretical_dimension(2, 10)) < 0.02, tail

    r = slowfast.codimension_from_dimension(2, 1.0 / 3.0)
    assert r["j"] == 0 and r["codimension"] == 1
    assert slowfast.theoretical_dimension(2) == 1.0
    assert math.isclose(slowfast.chirp_theoretical_dimension(2, 1), 1.4)

    c = slowfast.codimension_from_h1([1.0])
    assert c["codimension"] == 1 and c["alpha"] < 0
    assert slowfast.codimension_from_h1([0.0, 1.0])["codimension"] == "inf"
    inv = slowfast.series_inverse([0.0, 1.0, 1.0, 0.0, 0.0, 0.0])
    assert inv[1:] == [1.0, -1.0, 2.0, -5.0, 14.0]
    g = slowfast.slow_dynamics([0.0], order=6)
    assert g[1] == -1.0 and all(x == 0 for i, x in enumerate(g) if i != 1)

    try:
        slowfast.Model.lienard(0, 0.0)
    except ValueError as e:
        assert "degenerate" in str(e)
    else:
        raise AssertionError("a = 0 should be rejected")

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
