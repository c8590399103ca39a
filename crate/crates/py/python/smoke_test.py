"""Smoke test for the Python bindings; run after `maturin develop` (or with the built module on PYTHONPATH)."""

import math
import pathlib

import geno_dirichlet_py as gd

DB = pathlib.Path(__file__).resolve().parents[2] / "core" / "data" / "vwa.csv"


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} vs {b}"


def main():
    spec = gd.DirichletSpec.load(str(DB))
    assert len(spec) == 9 and spec.total == 604.0

    close(gd.prob(spec, "14/16", 0.0), 2 * 57 * 121 / (604 * 605), 1e-15)
    close(gd.theta_tilde(0.02, 604), 0.0216198347, 1e-9)
    assert gd.stirling_row(4) == [0, 6, 11, 6, 1]

    # one person: theta-tilde reproduces the exact model
    for g, p in gd.distribution(spec, 0.02, "exact"):
        close(gd.prob(spec, g, 0.02, "theta-tilde"), p, 1e-12 * p)

    two = gd.distribution(spec, 0.02, "exact", persons=2)
    assert len(two) == 2025
    close(math.fsum(p for _, p in two), 1.0, 1e-10)

    hw = gd.compare(spec, 0.02, "hw")
    close(hw["min"], 0.0712, 5e-5)
    close(hw["kl"], 0.001376, 0.005 * 0.001376)

    cond = dict(gd.conditional(spec, "14/16,16/17,15/15", 0.02))
    plain = dict(gd.distribution(spec, 0.02, "theta-tilde"))
    assert cond["15/15"] > plain["15/15"]

    est, se = gd.mc_oracle(spec, "17/17,14/16", 0.02, samples=200_000, seed=3)
    exact = gd.prob(spec, "17/17,14/16", 0.02)
    assert abs(est - exact) < 4 * se

    try:
        gd.prob(spec, "14/99", 0.02)
    except ValueError as e:
        assert "99" in str(e)
    else:
        raise AssertionError("unknown allele accepted")

    print("python smoke test passed")


if __name__ == "__main__":
    main()
