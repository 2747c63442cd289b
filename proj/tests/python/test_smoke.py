"""Smoke tests for the python module: the worked Hald example end to end,
plus limit-trace and simulation sanity. Runs standalone (python test_smoke.py)
or under pytest."""

import math

import groupfx as g


def approx(a, b, tol):
    assert abs(a - b) <= tol, f"{a} != {b} (tol {tol})"


def test_hald_pipeline():
    d = g.hald_dataset()
    assert d.n == 13
    assert d.predictor_names == ["x1", "x2", "x3", "x4"]

    sd, st = g.standardize(d)
    c = g.correlation_matrix(sd)
    approx(c.r[0, 2], -0.82413, 1e-5)
    approx(c.r[1, 3], -0.97295, 1e-5)

    groups = g.detect_groups(c, 0.8)
    assert groups == [[0, 2], [1, 3]]

    ad = g.arrange_dataset(d, 0.8, True)
    assert ad.legend == ["x1 = x1", "x2 = -x3", "x3 = x2", "x4 = -x4"]

    sd2, st2 = g.standardize(ad.data)
    fit = g.fit_standardized(sd2)
    for got, want in zip(fit.coefficients, (31.607, -2.261, 27.500, 8.353)):
        approx(got, want, 1e-3)
    for got, want in zip(fit.std_errors, (14.308, 15.788, 36.784, 38.762)):
        approx(got, want, 1e-3)
    approx(math.sqrt(fit.sigma2_hat), 2.306, 1e-3)
    assert fit.df == 9

    e1 = g.weighted_effect(fit, g.GroupEffectSpec(ad.groups[0], [0.5, 0.5]))
    approx(e1.estimate, 14.673, 1e-3)
    approx(e1.std_error, 1.4568, 1e-3)
    approx(math.sqrt(e1.variance_floor), 1.153, 1e-3)

    near = g.weighted_effect(fit, g.GroupEffectSpec(ad.groups[0], [0.45, 0.55]))
    approx(near.estimate, 12.979, 1e-3)
    approx(near.std_error, 2.568, 1e-3)
    assert near.variance_floor is None

    raw = g.destandardize(fit, st2)
    approx(raw.slopes[0], 31.607 / 20.377, 1e-4)
    w = g.variability_weighted_effect(raw, fit, st2, ad.groups[0])
    approx(w.estimate, 0.6895, 2e-4)
    assert w.scale == g.EffectScale.raw


def test_limits_and_simulation():
    trace = g.limit_trace(4, [0.0, 0.9, 0.99, 0.999])
    approx(trace[-1].quad_form, 1.00075, 1e-5)
    approx(trace[-1].lambda1, 3.997, 1e-10)
    approx(trace[0].var_ratio, 0.25, 1e-12)

    rep = g.simulate_group_effect(2, 20, 0.9, [1.0, 1.0], 1.0, 500, 7)
    again = g.simulate_group_effect(2, 20, 0.9, [1.0, 1.0], 1.0, 500, 7)
    assert rep.empirical_var == again.empirical_var
    assert rep.ratio == again.ratio

    silent = g.simulate_group_effect(2, 20, 0.9, [1.0, 1.0], 0.0, 10, 7)
    assert silent.empirical_var == 0.0


def test_errors_surface_as_python_exceptions():
    try:
        g.load_csv("a,b\n1,2\n", "missing")
        raise AssertionError("expected ParseError")
    except g.ParseError:
        pass

    try:
        g.equicorrelation_matrix(4, 1.0)
        raise AssertionError("expected ValueError")
    except ValueError:
        pass


if __name__ == "__main__":
    test_hald_pipeline()
    test_limits_and_simulation()
    test_errors_surface_as_python_exceptions()
    print("smoke tests passed")
