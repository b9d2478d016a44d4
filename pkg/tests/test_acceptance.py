"""End-to-end acceptance checks.

Each test covers one headline capability at its stated tolerance and time
budget, and prints a single PASS line when it holds.  These are slower
than the unit tests (several minutes total) and exercise the public CLI
and library surface the way a study of a new presentation would.
"""

import json
import math
import time
from fractions import Fraction

import pytest

from cogrowth import engine, oracle, stats, words
from cogrowth.cli import main, read_blocks
from cogrowth.engine import BSSpec, iterate_bs_system
from cogrowth.presentation import builtin_presentation
from cogrowth.qseries import RatSeries, integer_coefficients, read_coefficients, substitute_reduced
from cogrowth.sampler import (ChainState, SamplerConfig, TemperingConfig,
                              geometric_ladder, run_tempered)

from test_sampler import build_kernel


def _report(num, detail):
    print(f"criterion {num}: PASS — {detail}")


def test_criterion_01_z2_series_is_central_binomial_squared(tmp_path, capsys):
    t0 = time.time()
    path = tmp_path / "z2.tsv"
    code = main(["series", "--group", "bs", "--n", "1", "--m", "1",
                 "--terms", "40", "-o", str(path)])
    capsys.readouterr()
    assert code == 0
    got = read_coefficients(path)
    want = [math.comb(n, n // 2) ** 2 if n % 2 == 0 else 0 for n in range(41)]
    assert got == want
    elapsed = time.time() - t0
    assert elapsed < 10
    _report(1, f"40 terms exact in {elapsed:.1f}s")


def test_criterion_02_bs_nn_algebraic_identities():
    t0 = time.time()
    _, _, g2 = iterate_bs_system(BSSpec(2, 2, 40))
    assert engine.verify_bs_nn_polynomial(2, g2)
    _, _, g3 = iterate_bs_system(BSSpec(3, 3, 30))
    assert engine.verify_bs_nn_polynomial(3, g3)
    _, _, g4 = iterate_bs_system(BSSpec(4, 4, 30))
    assert engine.verify_bs_nn_polynomial(4, g4)
    elapsed = time.time() - t0
    assert elapsed < 300
    _report(2, f"N=2 (z^40), N=3, N=4 (z^30) residuals all zero in "
               f"{elapsed:.0f}s")


def test_criterion_03_engine_matches_brute_force():
    t0 = time.time()
    for n, m in ((1, 1), (1, 2), (2, 2), (2, 3), (3, 3)):
        _, _, g = iterate_bs_system(BSSpec(n, m, 12))
        ev = oracle.evaluator_for("bs", (n, m))
        assert g.constant_term() == oracle.count_trivial_words(ev, 12), (n, m)
    elapsed = time.time() - t0
    assert elapsed < 600
    _report(3, f"five (N,M) pairs agree with exhaustive counts to n=12 in "
               f"{elapsed:.0f}s")


def test_criterion_04_growth_rates_from_long_series():
    targets = {2: 3.792765039, 3: 3.647639445, 4: 3.569497357,
               5: 3.525816111}
    t0 = time.time()
    details = []
    for n, mu_ref in targets.items():
        _, _, g = iterate_bs_system(BSSpec(n, n, 200))
        est = engine.growth_rate_estimate(g.constant_term(),
                                          correction_exponent=-2.0)
        assert abs(est.mu - mu_ref) < 5e-3, (n, est.mu)
        lam_ref = engine.mu_to_lambda(mu_ref)
        assert abs(est.lam - lam_ref) < 1e-2, (n, est.lam)
        details.append(f"N={n} mu={est.mu:.6f}")
    elapsed = time.time() - t0
    assert elapsed < 3600
    _report(4, f"{'; '.join(details)} in {elapsed:.0f}s")


def test_criterion_05_free_product_closed_forms():
    t0 = time.time()
    for which in (1, 2, 3):
        coeffs = engine.kouksov_series(which, 12)
        assert all(isinstance(c, int) and c >= 0 for c in coeffs)
        ev = oracle.evaluator_for(f"kouksov{which}")
        assert coeffs == oracle.count_trivial_words(ev, 12, reduced=True)
    elapsed = time.time() - t0
    assert elapsed < 300
    _report(5, f"three free-product expansions match reduced exhaustive "
               f"counts to n=12 in {elapsed:.0f}s")


def test_criterion_06_free_group_series_and_reduction_identity():
    t0 = time.time()
    f2 = engine.free_group_series(2, 40)
    assert [f2[0], f2[2], f2[4], f2[6]] == [1, 4, 28, 232]
    ev = oracle.evaluator_for("free", (2,))
    assert f2[:13] == oracle.count_trivial_words(ev, 12)
    series = RatSeries.from_terms(40, {n: c for n, c in enumerate(f2)})
    reduced = integer_coefficients(substitute_reduced(series, 2))
    assert reduced == [1] + [0] * 40
    elapsed = time.time() - t0
    assert elapsed < 60
    _report(6, f"free-group counts match the exhaustive oracle and reduce "
               f"to 1 through order 40 in {elapsed:.1f}s")


def test_criterion_07_exact_detailed_balance_on_z2():
    t0 = time.time()
    p = builtin_presentation("z2", ())
    layers = oracle.enumerate_trivial_words(oracle.Z2Evaluator(), 6)
    states = [w for ws in layers.values() for w in ws]
    worst = 0.0
    for alpha in (-1.0, 0.0, 1.0):
        for beta in (0.1, 0.2, 0.3):
            kernel = build_kernel(p, states, alpha, beta)
            weight = {w: (len(w) + 1) ** (1 + alpha) * beta ** len(w)
                      for w in states}
            total = sum(weight.values())
            for (w, v), prob in kernel.items():
                flow = weight[w] / total * prob
                back = weight[v] / total * kernel.get((v, w), 0.0)
                worst = max(worst, abs(flow - back))
    assert worst < 1e-12
    elapsed = time.time() - t0
    assert elapsed < 60
    _report(7, f"max detailed-balance violation {worst:.2e} over 9 "
               f"(alpha, beta) pairs in {elapsed:.1f}s")


def test_criterion_08_tempered_z2_means_match_exact():
    t0 = time.time()
    p = builtin_presentation("z2", ())
    cfg = TemperingConfig(ladder=geometric_ladder(0.05, 0.30, 20),
                          swap_interval=1000, alpha=1.0, seed=20260826,
                          iterations_per_block=25000, num_blocks=40)
    assert 20 * cfg.iterations_per_block * cfg.num_blocks >= 10_000_000
    runs = run_tempered(cfg, p)
    d = engine.bs11_reduced_series(400)
    worst_z = 0.0
    for obs in runs:
        est = stats.ratio_estimator(obs)
        exact = stats.exact_canonical_mean(d, obs.beta)
        z = abs(est.mean - exact) / est.stderr
        worst_z = max(worst_z, z)
        assert z < 3.0, (obs.beta, est.mean, exact, est.stderr)
    elapsed = time.time() - t0
    assert elapsed < 1800
    _report(8, f"20 rungs within 3 stderr of exact canonical means, worst "
               f"|z|={worst_z:.2f}, in {elapsed:.0f}s")


def test_criterion_09_critical_fugacity_workflow(tmp_path, capsys):
    t0 = time.time()
    cases = [
        ("z2", "0.22:0.325:14", 1 / 3),
        ("kouksov1", "0.23:0.333:14", 0.3418821478),
    ]
    details = []
    for group, ladder, beta_ref in cases:
        csv = tmp_path / f"{group}.csv"
        code = main(["sample", "--group", group, "--alpha", "1",
                     "--ladder", ladder, "--seed", "5",
                     "--swap-interval", "500", "--iters", "25000",
                     "--blocks", "40", "-o", str(csv)])
        assert code == 0
        code = main(["analyze", str(csv), "--degree", "1", "--skip", "7",
                     "--k", "2"])
        out, _ = capsys.readouterr()
        assert code == 0
        beta_c = json.loads(out.strip().splitlines()[-1])["beta_c"]
        assert abs(beta_c - beta_ref) < 0.015, (group, beta_c)
        details.append(f"{group} beta_c={beta_c:.4f} (ref {beta_ref:.4f})")
    elapsed = time.time() - t0
    assert elapsed < 7200
    _report(9, f"{'; '.join(details)} in {elapsed:.0f}s")


def _exponent_vector(w, k):
    v = [0] * k
    for x in w:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def _in_relator_lattice(v, rel_vecs):
    """Is v an integer combination of the relator exponent vectors?"""
    cols = [list(map(Fraction, r)) for r in rel_vecs]
    rows = len(v)
    mat = [[cols[j][i] for j in range(len(cols))] + [Fraction(v[i])]
           for i in range(rows)]
    piv, pivots = 0, []
    for c in range(len(cols)):
        r = next((i for i in range(piv, rows) if mat[i][c] != 0), None)
        if r is None:
            continue
        mat[piv], mat[r] = mat[r], mat[piv]
        pr = mat[piv]
        for i in range(rows):
            if i != piv and mat[i][c] != 0:
                f = mat[i][c] / pr[c]
                mat[i] = [a - f * b for a, b in zip(mat[i], pr)]
        pivots.append((piv, c))
        piv += 1
    if any(mat[i][-1] != 0 for i in range(piv, rows)):
        return False
    return all((mat[i][-1] / mat[i][c]).denominator == 1 for i, c in pivots)


def test_criterion_10_thompson_presentations_run_clean():
    ladder = (0.15, 0.25, 0.30, 1 / 3)
    details = []
    for name in ("thompson1", "thompson2", "thompson3"):
        p = builtin_presentation(name, ())
        k = p.num_generators
        rel_vecs = [_exponent_vector(r, k) for r in p.relators]

        # one million steps at every rung, with conserved-quantity checks
        for rung, beta in enumerate(ladder):
            chain = ChainState(p, SamplerConfig(alpha=1.0, beta=beta,
                                                seed=78 + rung))
            for i in range(1_000_000):
                chain.step()
                if i % 1000 == 999:
                    w = tuple(chain.current)
                    assert words.is_reduced(w), (name, beta, w)
                    assert _in_relator_lattice(_exponent_vector(w, k),
                                               rel_vecs), (name, beta, w)

        cfg = TemperingConfig(ladder=ladder, swap_interval=1000, alpha=1.0,
                              seed=77, iterations_per_block=25000,
                              num_blocks=40)
        means = [stats.ratio_estimator(o).mean for o in run_tempered(cfg, p)]
        assert all(math.isfinite(m) for m in means), (name, means)
        if name == "thompson1":
            assert all(b >= a - 1e-9 for a, b in zip(means, means[1:])), means
        details.append(f"{name} means {[round(m, 1) for m in means]}")
    _report(10, "; ".join(details))


def test_criterion_11_trimmed_bs23_tracks_exact():
    t0 = time.time()
    _, _, g_exact = iterate_bs_system(BSSpec(2, 3, 60))
    exact = g_exact.constant_term()
    assert exact[60] == 16203703473875727282335363050802
    _, _, g_trim = iterate_bs_system(BSSpec(2, 3, 60, trim_threshold=2 ** 12))
    approx = g_trim.constant_term()
    worst = max((abs(a - e) / e for e, a in zip(exact, approx) if e),
                default=0.0)
    assert worst <= 1e-3
    elapsed = time.time() - t0
    assert elapsed < 1800
    _report(11, f"worst relative error {worst:.2e} for n <= 60 in "
                f"{elapsed:.0f}s")
