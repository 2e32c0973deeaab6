"""Smoke test for the powerlaw_lrt extension module.

Build and install first, e.g.

    cd crates/python && maturin build --release -o dist && pip install dist/*.whl
"""

import math

import powerlaw_lrt as pl


def close(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def main():
    close(pl.hurwitz_zeta(2.0, 1.0), math.pi ** 2 / 6, 1e-12)
    close(pl.erfc(1.0), math.erfc(1.0), 1e-12)
    close(pl.chi2_sf_1df(3.841458820694124), 0.05, 1e-9)
    close(pl.chi2_quantile_1df(0.95), 3.841458820694124, 1e-6)

    m = pl.PowerLawModel(2.0, 1)
    close(m.pmf(1), 6 / math.pi ** 2, 1e-12)
    close(m.cdf(2), 0.7599088773175333, 1e-12)
    assert m.quantile(0.61) == 2

    f = pl.mle_approx([1, 2, 3])
    close(f.alpha_hat, 1.7749533004219863, 1e-12)
    f = pl.fit([1, 1, 2, 3, 5, 8], estimator="exact")
    close(f.alpha_hat, 1.7261662488041602, 1e-8)

    try:
        pl.mle_exact([1, 1, 1])
    except pl.EstimationError:
        pass
    else:
        raise AssertionError("expected EstimationError")
    try:
        pl.fit([0, 1])
    except ValueError:
        pass
    else:
        raise AssertionError("expected ValueError")

    s1 = pl.draw_sample(2.0, 1, 20_000, seed=1)
    s2 = pl.draw_sample(2.0, 1, 20_000, seed=2)
    assert s1 == pl.draw_sample(2.0, 1, 20_000, seed=1)
    assert min(s1) >= 1
    r = pl.two_sample_test(s1, s2)
    assert r.lambda_ >= 0 and 0 <= r.p_value <= 1
    r_swapped = pl.two_sample_test(s2, s1)
    assert r.lambda_ == r_swapped.lambda_
    close(r.p_value, pl.chi2_sf_1df(r.lambda_), 0)

    cal = pl.calibrate_null(2.0, n_per_sample=300, replicates=50, seed=3, levels=[0.05, 0.1])
    assert cal.replicates_run + len(cal.skipped) == 50
    assert 0 <= cal.rejection_rate(0.05) <= cal.rejection_rate(0.1) <= 1
    pw = pl.power_sweep(2.0, 1.0, n_per_sample=1000, replicates=20, seed=4)
    assert pw.rejection_rate == 1.0

    print("python smoke test: ok")


if __name__ == "__main__":
    main()
