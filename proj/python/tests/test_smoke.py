import math

import pytest

import rsbesov as rb


def test_version():
    assert rb.__version__
    assert rb.rng_id == "mt19937_64/u53"


def test_round_trip_and_parseval():
    w = rb.Wavelet(3)
    u = [math.sin(0.37 * i) + 0.1 * (i % 7) for i in range(256)]
    p = rb.forward_transform(u, [1], 8, w)
    back = rb.inverse_transform(p, w)
    assert max(abs(a - b) for a, b in zip(u, back)) < 1e-10
    l2 = math.sqrt(sum(x * x for x in u) / len(u))
    assert abs(p.l2() - l2) < 1e-10 * l2


def test_dirac_critical_exponent():
    w = rb.Wavelet(3)
    d = rb.synthesize_dirac([1], 12, w, [0.3])
    assert abs(rb.critical_exponent(d, 2.0, 4) + 0.5) < 0.1
    assert abs(rb.critical_exponent(d, rb.inf, 4) + 1.0) < 0.1


def test_reconstruct_sin_lift():
    w = rb.Wavelet(3)
    M = rb.Model.polynomial([1], 2.5, w, 8)

    def dsin(k, x):
        return (2 * math.pi) ** k[0] * math.sin(2 * math.pi * x[0] + k[0] * math.pi / 2)

    f = rb.taylor_lift(M, 2.5, dsin)
    xi = rb.reconstruct(f, M)
    err = rb.l2_distance_to_function(xi, w, lambda x: math.sin(2 * math.pi * x[0]))
    assert err / math.sqrt(0.5) < 1e-4


def test_noise_reconstruction_is_exact():
    w = rb.Wavelet(3)
    xi = rb.synthesize_random_besov([1], 7, -0.5, 3)
    M = rb.Model.noise(-0.5, xi, 0.5, w)
    tau = [name for name, _ in M.symbols()].index("Xi")
    r = rb.reconstruct(rb.constant_md(M, 0.5, tau), M)
    assert (r - xi).l2() < 1e-12


def test_preconditions_raise():
    with pytest.raises(ValueError):
        rb.Wavelet(0)
    xi = rb.synthesize_random_besov([1], 5, -0.5, 1)
    with pytest.raises(ValueError):
        rb.besov_norm(xi, 0.0, 0.5, 1.0)


def test_schauder_identity():
    assert rb.schauder_identity(6, 0.5, 1.75, rb.Wavelet(6, 2)) < 1e-3


def test_cli_usage_and_run(tmp_path):
    code, _, err = rb.run_cli([])
    assert code == 2 and "usage" in err
    conf = tmp_path / "c.conf"
    conf.write_text("[grid]\nlevels = 6\n[run]\ninput = dirac\n")
    code, out, _ = rb.run_cli(["besov", "--config", str(conf), "--out", str(tmp_path / "o")])
    assert code == 0
    assert (tmp_path / "o" / "besov.csv").read_text().startswith("# version")
