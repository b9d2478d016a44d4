"""Metropolis Markov chain on freely reduced trivial words.

Two elementary moves act on the current word: conjugation by a random
signed generator, and left-insertion of an element of the relator
closure at a uniform position.  Left-insertions are only attempted when
cancellation occurs solely to the left and the length drops by at most
the relator length; together with the rejection step this makes every
move uniquely reversible, so the chain satisfies detailed balance with
respect to the stretched Boltzmann law (|w|+1)^(1+alpha) * beta^|w|.

The tempered driver runs a ladder of chains at increasing beta and
proposes adjacent swaps with the standard replica-exchange ratio.
"""

from __future__ import annotations

import logging
import math
import random
from dataclasses import dataclass, field
from typing import Optional, Sequence

from . import words
from .presentation import Presentation, RelatorSampler, wreath_commutator
from .words import Word

log = logging.getLogger(__name__)


@dataclass(frozen=True)
class SamplerConfig:
    alpha: float
    beta: float
    p_c: float = 0.5
    seed: int = 0
    iterations_per_block: int = 10_000
    num_blocks: int = 100
    theta: float = 0.5  # decay for infinite relator families

    def __post_init__(self):
        if not 0.0 < self.p_c < 1.0:
            raise ValueError("p_c must lie strictly between 0 and 1")
        if self.beta <= 0.0:
            raise ValueError("beta must be positive")
        if self.iterations_per_block < 1 or self.num_blocks < 1:
            raise ValueError("block sizes must be positive")


@dataclass(frozen=True)
class TemperingConfig:
    ladder: tuple[float, ...]
    swap_interval: int = 1000
    alpha: float = 0.0
    p_c: float = 0.5
    seed: int = 0
    iterations_per_block: int = 10_000
    num_blocks: int = 100
    theta: float = 0.5

    def __post_init__(self):
        if any(b <= 0 for b in self.ladder):
            raise ValueError("betas must be positive")
        if any(b1 >= b2 for b1, b2 in zip(self.ladder, self.ladder[1:])):
            raise ValueError("ladder must be strictly increasing")
        if self.swap_interval < 1:
            raise ValueError("swap_interval must be positive")


@dataclass
class ObservableSeries:
    """Per-block sums of the ratio-estimator observables and length moments.

    Empty-word visits are excluded from all sums and from ``count``.
    """

    alpha: float
    beta: float
    sum_f1: list[float] = field(default_factory=list)
    sum_f2: list[float] = field(default_factory=list)
    sum_len: list[float] = field(default_factory=list)
    sum_len2: list[float] = field(default_factory=list)
    count: list[int] = field(default_factory=list)
    steps_per_block: int = 0
    accept_conj: list[int] = field(default_factory=list)
    accept_ins: list[int] = field(default_factory=list)
    swaps_accepted: list[int] = field(default_factory=list)

    @property
    def num_blocks(self) -> int:
        return len(self.sum_f1)


# ---------------------------------------------------------------------------
# elementary moves (pure functions; the chain inlines equivalents)

def propose_conjugation(w: Sequence[int], rng, k: int,
                        alpha: float, beta: float):
    """Pick a random signed generator, conjugate, and return the candidate
    together with its acceptance probability."""
    x = rng.choice([words.letter(g, s) for g in range(k) for s in (1, -1)])
    cand = words.conjugate_letter(tuple(w), x)
    return cand, conjugation_accept_prob(len(w), len(cand), alpha, beta)


def conjugation_accept_prob(lw: int, lc: int, alpha: float, beta: float) -> float:
    return min(1.0, ((lc + 1) / (lw + 1)) ** (1 + alpha) * beta ** (lc - lw))


def insertion_accept_prob(lw: int, lc: int, alpha: float, beta: float) -> float:
    return min(1.0, ((lc + 1) / (lw + 1)) ** alpha * beta ** (lc - lw))


def propose_left_insertion(w: Sequence[int], r: Sequence[int], m: int):
    """Attempt the left-insertion of r into w after position m.

    Returns (valid, candidate).  The inserted relator may cancel only
    leftward into the prefix w[:m]; the move is invalid if, after that
    cancellation, anything would still cancel against the tail w[m:].
    This restriction pairs every insertion with a unique reverse
    insertion of the inverse relator, which keeps the chain reversible.
    Appending (m = |w|) is always valid.
    """
    w = tuple(w)
    r = tuple(r)
    lw, lr = len(w), len(r)
    if not 0 <= m <= lw:
        raise ValueError("insertion position out of range")
    i, j = m, 0
    while i > 0 and j < lr and w[i - 1] == -r[j]:
        i -= 1
        j += 1
    z = w[:i] + r[j:]
    if m < lw and z and z[-1] == -w[m]:
        return False, None
    return True, z + w[m:]


# ---------------------------------------------------------------------------
# chain

class ChainState:
    """One Markov chain: current word, RNG stream and move counters."""

    def __init__(self, p: Presentation, cfg: SamplerConfig,
                 w0: Optional[Word] = None, stream_tag: str = "0"):
        self.presentation = p
        self.alpha = cfg.alpha
        self.beta = cfg.beta
        self.p_c = cfg.p_c
        self.relators = RelatorSampler(p, theta=cfg.theta)
        self.rng = random.Random(f"{cfg.seed}:{stream_tag}")
        if w0 is None:
            if p.infinite_family is not None:
                w0 = wreath_commutator(0, 1, p.infinite_family.a_index,
                                       p.infinite_family.t_index)
            else:
                w0 = p.relators[0]
        self.current: list[int] = list(w0)
        self.step_count = 0
        self.accept_conj = 0
        self.accept_ins = 0
        k = p.num_generators
        self._letters = [words.letter(g, s) for g in range(k) for s in (1, -1)]
        self._log_beta = math.log(cfg.beta)

    def set_beta(self, beta: float):
        self.beta = beta
        self._log_beta = math.log(beta)

    def step(self):
        rng = self.rng
        w = self.current
        lw = len(w)
        if rng.random() < self.p_c:
            x = self._letters[rng.randrange(len(self._letters))]
            if not w:
                cand = w
            elif w[0] == -x:
                cand = w[1:-1] if w[-1] == x else w[1:] + [-x]
            elif w[-1] == x:
                cand = [x] + w[:-1]
            else:
                cand = [x] + w + [-x]
            lc = len(cand)
            if lc != lw:
                logp = ((1 + self.alpha) * math.log((lc + 1) / (lw + 1))
                        + (lc - lw) * self._log_beta)
                if logp < 0 and rng.random() >= math.exp(logp):
                    self.step_count += 1
                    return
            self.current = cand
            self.accept_conj += 1
        else:
            r = self.relators.sample(rng)
            lr = len(r)
            m = rng.randrange(lw + 1)
            # r may cancel only leftward into w[:m]; reject if anything
            # would still cancel against w[m:] afterwards
            i = m
            j = 0
            while i > 0 and j < lr and w[i - 1] == -r[j]:
                i -= 1
                j += 1
            if m < lw:
                last = r[lr - 1] if j < lr else (w[i - 1] if i else 0)
                if last == -w[m]:
                    self.step_count += 1
                    return
            cand = w[:i] + list(r[j:]) + w[m:]
            lc = len(cand)
            if lc != lw:
                logp = (self.alpha * math.log((lc + 1) / (lw + 1))
                        + (lc - lw) * self._log_beta)
                if logp < 0 and rng.random() >= math.exp(logp):
                    self.step_count += 1
                    return
            self.current = cand
            self.accept_ins += 1
        self.step_count += 1


def metropolis_step(state: ChainState) -> ChainState:
    state.step()
    return state


def _record(series: ObservableSeries, alpha: float, chain: ChainState,
            sums: list[float]):
    l = len(chain.current)
    if l:
        wgt = (l + 1) ** (-(1 + alpha))
        sums[0] += l * wgt
        sums[1] += wgt
        sums[2] += l
        sums[3] += l * l
        sums[4] += 1


def run_chain(cfg: SamplerConfig, p: Presentation,
              w0: Optional[Word] = None) -> ObservableSeries:
    """Run a single chain for num_blocks x iterations_per_block steps."""
    chain = ChainState(p, cfg, w0=w0)
    series = ObservableSeries(alpha=cfg.alpha, beta=cfg.beta,
                              steps_per_block=cfg.iterations_per_block)
    for _ in range(cfg.num_blocks):
        sums = [0.0, 0.0, 0.0, 0.0, 0]
        ac0, ai0 = chain.accept_conj, chain.accept_ins
        for _ in range(cfg.iterations_per_block):
            chain.step()
            _record(series, cfg.alpha, chain, sums)
        series.sum_f1.append(sums[0])
        series.sum_f2.append(sums[1])
        series.sum_len.append(sums[2])
        series.sum_len2.append(sums[3])
        series.count.append(sums[4])
        series.accept_conj.append(chain.accept_conj - ac0)
        series.accept_ins.append(chain.accept_ins - ai0)
        series.swaps_accepted.append(0)
    return series


def run_tempered(t: TemperingConfig, p: Presentation,
                 w0: Optional[Word] = None) -> list[ObservableSeries]:
    """Parallel tempering over the beta ladder.

    All chains advance swap_interval steps, then one sweep of adjacent
    swap proposals runs bottom-up.  The swap acceptance is the replica
    exchange ratio, which for a shared alpha reduces to
    (beta_hi / beta_lo) ** (len_lo - len_hi).  Results are deterministic
    for a given seed: each chain owns a stream derived from (seed, rung)
    and swaps use a dedicated stream.
    """
    chains = []
    for idx, beta in enumerate(t.ladder):
        cfg = SamplerConfig(alpha=t.alpha, beta=beta, p_c=t.p_c, seed=t.seed,
                            iterations_per_block=t.iterations_per_block,
                            num_blocks=t.num_blocks, theta=t.theta)
        chains.append(ChainState(p, cfg, w0=w0, stream_tag=str(idx)))
    swap_rng = random.Random(f"{t.seed}:swap")
    out = [ObservableSeries(alpha=t.alpha, beta=beta,
                            steps_per_block=t.iterations_per_block)
           for beta in t.ladder]
    swaps = 0
    log_betas = [math.log(b) for b in t.ladder]
    for block in range(t.num_blocks):
        sums = [[0.0, 0.0, 0.0, 0.0, 0] for _ in chains]
        accept0 = [(c.accept_conj, c.accept_ins) for c in chains]
        swaps0 = swaps
        done = 0
        while done < t.iterations_per_block:
            todo = min(t.swap_interval, t.iterations_per_block - done)
            for ci, chain in enumerate(chains):
                s = sums[ci]
                alpha = t.alpha
                for _ in range(todo):
                    chain.step()
                    l = len(chain.current)
                    if l:
                        wgt = (l + 1) ** (-(1 + alpha))
                        s[0] += l * wgt
                        s[1] += wgt
                        s[2] += l
                        s[3] += l * l
                        s[4] += 1
            done += todo
            for i in range(len(chains) - 1):
                llo = len(chains[i].current)
                lhi = len(chains[i + 1].current)
                logp = (llo - lhi) * (log_betas[i + 1] - log_betas[i])
                if logp >= 0 or swap_rng.random() < math.exp(logp):
                    chains[i].current, chains[i + 1].current = \
                        chains[i + 1].current, chains[i].current
                    swaps += 1
        for ci in range(len(chains)):
            s = sums[ci]
            out[ci].sum_f1.append(s[0])
            out[ci].sum_f2.append(s[1])
            out[ci].sum_len.append(s[2])
            out[ci].sum_len2.append(s[3])
            out[ci].count.append(s[4])
            out[ci].accept_conj.append(chains[ci].accept_conj - accept0[ci][0])
            out[ci].accept_ins.append(chains[ci].accept_ins - accept0[ci][1])
            out[ci].swaps_accepted.append(swaps - swaps0)
        if block % 20 == 19:
            log.info("tempered run: block %d/%d", block + 1, t.num_blocks)
    return out


def geometric_ladder(beta_min: float, beta_max: float, count: int) -> tuple[float, ...]:
    """Ladder clustered towards beta_max: geometric spacing of the gaps."""
    if count == 1:
        return (beta_max,)
    if not 0 < beta_min < beta_max:
        raise ValueError("need 0 < beta_min < beta_max")
    ratio = 0.75
    gaps = [ratio ** i for i in range(count - 1)]
    total = sum(gaps)
    span = beta_max - beta_min
    betas = [beta_min]
    for gap in gaps:
        betas.append(betas[-1] + span * gap / total)
    betas[-1] = beta_max
    return tuple(betas)
