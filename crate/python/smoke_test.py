"""Smoke test for the duplex_em_py extension module.

Build and install first:

    pip install -e crates/py --no-build-isolation
    python python/smoke_test.py
"""

import math

import duplex_em_py as dem


def close(a, b, tol=1e-12):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1.0)


def main():
    e, h = [0.3, -1.2, 0.7], [1.1, 0.4, -0.5]

    k0 = dem.invariants(e, h)["k"]
    re, rh = dem.dual_rotate(e, h, 0.83)
    k1 = dem.invariants([x for x, _ in re], [x for x, _ in rh])["k"]
    assert close(k0, k1), (k0, k1)

    beta = 0.5
    g = 1.0 / math.sqrt(1.0 - beta * beta)
    me, mh = dem.orthogonal_axes_magnitudes([1.0, 0.0, 0.0], [0.0, 0.6, 0.0], math.atanh(beta))
    assert close(me, g * (1.0 + beta * 0.6)) and close(mh, g * (0.6 - beta)), (me, mh)

    assert dem.quaternion_product([0, 1, 0, 0], [0, 1, 0, 0]) == [-1.0, 0.0, 0.0, 0.0]

    spec = dem.fock_spectrum(8, 2.0)
    for n in range(7):
        assert min(abs(s - 2.0 * (n + 0.5)) for s in spec) < 1e-12
    assert dem.commutator_defect(8) < 1e-14

    c1 = [(0.4, -0.2), (-0.3, 0.5)]
    c2 = [(0.1, 0.7), (0.6, 0.2)]
    assert dem.continuity_residual(c1, c2) < 1e-8
    q0 = dem.noether_charge(c1, c2, 0.0)
    q1 = dem.noether_charge(c1, c2, 0.4)
    assert close(q0[0], q1[0], 1e-10), (q0, q1)

    assert close(dem.charge_ratio(1.44e4, 1.0), 120.0)
    assert close(dem.elliptic_k(0.0), math.pi / 2)
    assert close(dem.elliptic_k(1 / math.sqrt(2)), 1.8540746773013719, 1e-13)

    sol = dem.solve_gap(1.0, 0.8, 0.0, 0.3, 4)
    assert close(sol["q"], 1.0, 1e-10), sol

    assert close(dem.ground_energy(1.0, 1.0, 0.1, 2), dem.ground_energy(1.0, 1.0, -0.1, 2))

    nu0, a = dem.fit_dispersion([1, 2, 3, 4], [99.75, 99.0, 97.75, 96.0])
    assert close(nu0, 100.0, 1e-10) and close(a, 0.25, 1e-10)

    try:
        dem.solve_gap(1.0, 1.0, 0.1, 0.1, 3)
    except ValueError:
        pass
    else:
        raise AssertionError("odd N accepted")

    rows = dem.verify_all(42)
    failed = [r["id"] for r in rows if not r["pass"]]
    assert not failed, failed

    print(f"duplex_em_py {dem.__version__}: smoke test passed ({len(rows)} checks)")


if __name__ == "__main__":
    main()
