import random
from collections import defaultdict

import pytest
from hypothesis import given, settings, strategies as st

from cogrowth import oracle, stats, words
from cogrowth.presentation import build_relator_closure, builtin_presentation
from cogrowth.sampler import (ChainState, SamplerConfig, TemperingConfig,
                              conjugation_accept_prob, geometric_ladder,
                              insertion_accept_prob, propose_left_insertion,
                              run_chain, run_tempered)


Z2 = builtin_presentation("z2")


def z2_states(n_max):
    ev = oracle.evaluator_for("z2", ())
    by_len = oracle.enumerate_trivial_words(ev, n_max, reduced=True)
    return [w for ws in by_len.values() for w in ws]


def build_kernel(p, states, alpha, beta):
    """Exact one-step transition probabilities restricted to the given
    state set, combining both move types."""
    S = build_relator_closure(p).elements
    k = p.num_generators
    letters = [words.letter(g, s) for g in range(k) for s in (1, -1)]
    idx = set(states)
    kernel = defaultdict(float)
    for w in states:
        lw = len(w)
        for x in letters:
            cand = words.conjugate_letter(w, x)
            if cand in idx and cand != tuple(w):
                a = conjugation_accept_prob(lw, len(cand), alpha, beta)
                kernel[(w, cand)] += 0.5 * a / len(letters)
        for r in S:
            for m in range(lw + 1):
                valid, cand = propose_left_insertion(w, r, m)
                if valid and cand in idx and cand != tuple(w):
                    a = insertion_accept_prob(lw, len(cand), alpha, beta)
                    kernel[(w, cand)] += 0.5 * a / (len(S) * (lw + 1))
    return kernel


class TestMoves:
    def test_append_always_valid(self):
        w = (1, 2, -1, -2)
        r = (2, 1, -2, -1)
        valid, cand = propose_left_insertion(w, r, len(w))
        assert valid and cand == ()

    def test_prepend_rejected_on_seam_cancellation(self):
        valid, _ = propose_left_insertion((1, 2), (2, -1), 0)
        assert not valid

    def test_interior_rejected_on_rightward_cancellation(self):
        # r ends with the inverse of the tail's first letter
        valid, _ = propose_left_insertion((1, 2, 1), (2, -2, -2), 1)
        assert not valid

    def test_full_cancellation_deletion_is_valid(self):
        # deleting one period of a periodic word must be a legal move
        w = (1, 2, -1, -2, 1, 2, -1, -2)
        valid, cand = propose_left_insertion(w, (2, 1, -2, -1), 4)
        assert valid and cand == (1, 2, -1, -2)

    def test_position_out_of_range(self):
        with pytest.raises(ValueError):
            propose_left_insertion((1,), (1, 1), 5)

    @given(st.lists(st.integers(-2, 2).filter(bool), max_size=10),
           st.integers(0, 10))
    @settings(max_examples=200)
    def test_candidate_is_reduced_and_conjugate_invariant(self, raw, m):
        w = words.free_reduce(raw)
        if m > len(w):
            return
        for r in build_relator_closure(Z2).elements:
            valid, cand = propose_left_insertion(w, r, m)
            if valid:
                assert words.is_reduced(cand)
                assert len(cand) >= len(w) - len(r)


class TestReversibility:
    def test_insertion_multiplicities_pair_with_inverse_relator(self):
        # for every transition w -> v realized by relator r, the reverse
        # v -> w must be realized by r^-1 in exactly as many ways; this
        # is what makes the proposal kernel reversible move-for-move
        S = build_relator_closure(Z2).elements
        for w in z2_states(8):
            fwd = defaultdict(int)
            for r in S:
                for m in range(len(w) + 1):
                    valid, cand = propose_left_insertion(w, r, m)
                    if valid and cand != w:
                        fwd[(r, cand)] += 1
            for (r, v), mult in fwd.items():
                rinv = words.invert(r)
                back = sum(1 for mm in range(len(v) + 1)
                           if propose_left_insertion(v, rinv, mm) == (True, w))
                assert back == mult, (w, r, v)

    def test_detailed_balance_exact(self):
        states = z2_states(6)
        for alpha in (-1.0, 0.0, 1.0):
            for beta in (0.1, 0.2, 0.3):
                kernel = build_kernel(Z2, states, alpha, beta)
                for (w, v), pr in kernel.items():
                    pi_w = (len(w) + 1) ** (1 + alpha) * beta ** len(w)
                    pi_v = (len(v) + 1) ** (1 + alpha) * beta ** len(v)
                    flow = pi_w * pr
                    back = pi_v * kernel.get((v, w), 0.0)
                    assert abs(flow - back) <= 1e-12 * max(flow, 1.0)


class TestIrreducibility:
    def test_all_short_words_reachable_from_relator(self):
        states = set(z2_states(12))
        kernel = build_kernel(Z2, states, 0.0, 0.2)
        adj = defaultdict(set)
        for (w, v), pr in kernel.items():
            if pr > 0:
                adj[w].add(v)
        start = Z2.relators[0]
        seen = {start}
        frontier = [start]
        while frontier:
            w = frontier.pop()
            for v in adj[w]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        for w in states:
            if len(w) <= 8:
                assert w in seen


class TestChain:
    def test_state_stays_trivial_and_reduced(self):
        ev = oracle.evaluator_for("bs", (2, 3))
        p = builtin_presentation("bs", (2, 3))
        cfg = SamplerConfig(alpha=1.0, beta=0.2, seed=12)
        ch = ChainState(p, cfg)
        for i in range(20000):
            ch.step()
            if i % 500 == 0:
                w = tuple(ch.current)
                assert words.is_reduced(w)
                assert ev.is_trivial(w)

    def test_word_lengths_even_when_relators_even(self):
        cfg = SamplerConfig(alpha=0.0, beta=0.25, seed=3)
        ch = ChainState(Z2, cfg)
        for _ in range(5000):
            ch.step()
            assert len(ch.current) % 2 == 0

    def test_deterministic_given_seed(self):
        cfg = SamplerConfig(alpha=1.0, beta=0.2, seed=7,
                            iterations_per_block=1000, num_blocks=5)
        a = run_chain(cfg, Z2)
        b = run_chain(cfg, Z2)
        assert a.sum_f1 == b.sum_f1 and a.count == b.count

    def test_seed_changes_trajectory(self):
        cfg1 = SamplerConfig(alpha=1.0, beta=0.2, seed=1,
                             iterations_per_block=1000, num_blocks=5)
        cfg2 = SamplerConfig(alpha=1.0, beta=0.2, seed=2,
                             iterations_per_block=1000, num_blocks=5)
        assert run_chain(cfg1, Z2).sum_f1 != run_chain(cfg2, Z2).sum_f1

    def test_empty_word_excluded_from_observables(self):
        cfg = SamplerConfig(alpha=-1.0, beta=0.05, seed=0,
                            iterations_per_block=2000, num_blocks=2)
        obs = run_chain(cfg, Z2)
        # at beta this small the chain spends most time at the empty word
        assert sum(obs.count) < 0.9 * 4000
        assert all(c <= 2000 for c in obs.count)

    def test_occupancy_matches_stationary_ratios(self):
        alpha, beta = 1.0, 0.2
        cfg = SamplerConfig(alpha=alpha, beta=beta, seed=42)
        ch = ChainState(Z2, cfg)
        hits = defaultdict(int)
        for _ in range(400_000):
            ch.step()
            if len(ch.current) <= 4:
                hits[tuple(ch.current)] += 1
        pi = lambda w: (len(w) + 1) ** (1 + alpha) * beta ** len(w)
        base = hits[()]
        for w, c in hits.items():
            if c > 500:
                assert abs(c / base - pi(w) / pi(())) < 0.15 * pi(w) / pi(())


class TestTempering:
    def test_ladder_validation(self):
        with pytest.raises(ValueError):
            TemperingConfig(ladder=(0.3, 0.2), alpha=1.0)

    def test_swaps_happen_and_streams_are_deterministic(self):
        t = TemperingConfig(ladder=(0.1, 0.2, 0.3), swap_interval=200,
                            alpha=1.0, seed=5, iterations_per_block=2000,
                            num_blocks=5)
        runs1 = run_tempered(t, Z2)
        runs2 = run_tempered(t, Z2)
        assert sum(runs1[0].swaps_accepted) > 0
        for a, b in zip(runs1, runs2):
            assert a.sum_f1 == b.sum_f1

    def test_rungs_ordered_by_mean_length(self):
        t = TemperingConfig(ladder=(0.05, 0.15, 0.25, 0.30), swap_interval=500,
                            alpha=1.0, seed=8, iterations_per_block=20000,
                            num_blocks=10)
        runs = run_tempered(t, Z2)
        means = [stats.ratio_estimator(o).mean for o in runs]
        assert means == sorted(means)


def test_geometric_ladder_shape():
    lad = geometric_ladder(0.1, 0.3, 8)
    assert len(lad) == 8
    assert lad[0] == 0.1 and lad[-1] == 0.3
    gaps = [b - a for a, b in zip(lad, lad[1:])]
    assert all(g2 < g1 for g1, g2 in zip(gaps, gaps[1:]))
    with pytest.raises(ValueError):
        geometric_ladder(0.3, 0.1, 5)
