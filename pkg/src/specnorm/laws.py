"""Executable checks for the quantitative statements the library is
built around: exhaustive where feasible, seeded random trials elsewhere.

Each check returns a LawReport; failures == 0 means pass and any
counterexample replays deterministically from (law_id, n, trials, seed).
Margins are (bound - achieved), so nonnegative is healthy.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from statistics import median

import numpy as np

from . import fourier, spectral
from .additive import (
    PointSet,
    bogolyubov_subgroup,
    is_arithmetically_connected,
    iterated,
    s_eta,
    set_stats,
    spec_set,
    sumset,
)
from .decompose import decompose, trivial_expr
from .fourier import RealFn, convolve, lp_norm, wht
from .generate import (
    gen_coset_ring,
    random_structured_set_mask,
    random_subgroup,
    rng_for,
)
from .gf2 import Ambient, rref_span
from .spectral import (
    a_norm,
    approx_hom_defect,
    pd_eval,
    psi,
    round_to_int,
    spectral_support_level,
)


@dataclass
class LawReport:
    law_id: str
    trials: int = 0
    failures: int = 0
    worst_margin: float = math.inf
    counterexample: dict | None = None
    elapsed: float = 0.0
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return self.failures == 0

    def record(self, margin: float, witness: dict) -> None:
        self.trials += 1
        if margin < self.worst_margin:
            self.worst_margin = margin
        if margin < 0:
            self.failures += 1
            if self.counterexample is None:
                self.counterexample = witness

    def to_json(self) -> dict:
        return {
            "law_id": self.law_id,
            "trials": self.trials,
            "failures": self.failures,
            "worst_margin": None if math.isinf(self.worst_margin) else self.worst_margin,
            "counterexample": self.counterexample,
            "elapsed": self.elapsed,
            "notes": self.notes,
        }


def _timed(fn):
    def wrapper(*args, **kwargs):
        t0 = time.perf_counter()
        rep = fn(*args, **kwargs)
        rep.elapsed = time.perf_counter() - t0
        return rep

    return wrapper


def _hadamard(N: int) -> np.ndarray:
    idx = np.arange(N)
    pop = np.array([bin(r & x).count("1") & 1 for r in idx for x in idx])
    return 1.0 - 2.0 * pop.reshape(N, N)


def _random_set(ambient: Ambient, rng) -> PointSet:
    """Half uniform-density, half structured (small-doubling) samples."""
    if rng.random() < 0.5:
        density = rng.choice([0.125, 0.25, 0.5])
        mask = rng.random(ambient.size) < density
        if not mask.any():
            mask[int(rng.integers(0, ambient.size))] = True
        return PointSet(ambient, mask)
    return PointSet(ambient, random_structured_set_mask(ambient, rng))


@_timed
def check_tiny_norm(n: int) -> LawReport:
    """Exhaustive: nonzero boolean f is a coset indicator iff a_norm <= 1
    iff parallelogram-closed, and otherwise a_norm >= 3/2, with the
    four-point certificate giving <f, phi> = 3 and ||phi-hat||_inf = 2.
    """
    if n > 4:
        raise ValueError("exhaustive check is limited to n <= 4")
    rep = LawReport(law_id="tiny-norm")
    N = 1 << n
    had = _hadamard(N)
    masks = np.arange(1, 1 << N, dtype=np.uint64)
    tables = (masks[:, None] >> np.arange(N, dtype=np.uint64)[None, :]) & 1
    tables = tables.astype(np.float64)
    anorms = np.abs(tables @ had / N).sum(axis=1)

    min_noncoset = math.inf
    for i in range(tables.shape[0]):
        f = tables[i]
        mask = f > 0.5
        S = np.nonzero(mask)[0]
        # coset test: translate to contain 0, then xor-closure
        S0 = S ^ S[0]
        inS0 = np.zeros(N, dtype=bool)
        inS0[S0] = True
        is_coset = bool(inS0[S0[:, None] ^ S0[None, :]].all())
        # parallelogram violation: p,q,r in S distinct with f(p^q^r)=0
        X = S[:, None, None] ^ S[None, :, None] ^ S[None, None, :]
        P, Q, R = np.meshgrid(S, S, S, indexing="ij")
        valid = (P != Q) & (P != R) & (Q != R)
        bad = valid & ~mask[X]
        closed = not bad.any()
        an = float(anorms[i])

        ok = True
        if is_coset != closed:
            ok = False
        if is_coset != (an <= 1 + 1e-9):
            ok = False
        if not is_coset:
            min_noncoset = min(min_noncoset, an)
            if an < 1.5 - 1e-9:
                ok = False
            # phi certificate from the first violating parallelogram
            w = np.argwhere(bad)[0]
            p, q, r = int(S[w[0]]), int(S[w[1]]), int(S[w[2]])
            phi = np.zeros(N)
            phi[p] = phi[q] = phi[r] = N
            phi[p ^ q ^ r] = -N
            if abs(float(f @ phi) / N - 3.0) > 1e-9:
                ok = False
            if abs(float(np.max(np.abs(phi @ had / N))) - 2.0) > 1e-9:
                ok = False
        rep.record(0.0 if ok else -1.0, {"mask": int(masks[i]), "n": n})
    # at n = 1 every nonzero boolean function is a coset indicator
    if math.isfinite(min_noncoset) and abs(min_noncoset - 1.5) > 1e-9:
        rep.record(-1.0, {"min_noncoset_anorm": min_noncoset})
    rep.notes["min_noncoset_anorm"] = min_noncoset
    return rep


@_timed
def check_pd(d_max: int = 4, points: int = 10**4) -> LawReport:
    """Grid check of the integer-detecting polynomial bounds."""
    rep = LawReport(law_id="pd")
    for d in range(d_max + 1):
        grid = np.linspace(-d - 0.5, d + 0.5, points)
        for t in grid:
            p = pd_eval(float(t), d)
            tbar = abs(t - round(t))
            rep.record(abs(p) - tbar + 1e-12, {"d": d, "t": float(t), "law": "lower"})
            if abs(t) <= d:
                rep.record(
                    tbar * 4.0**d - abs(p) + 1e-12,
                    {"d": d, "t": float(t), "law": "upper"},
                )
    return rep


@_timed
def check_approx_hom(n: int, trials: int, seed: int) -> LawReport:
    """defect(f, g, H) <= eta * a_norm(g) with measured eta."""
    rep = LawReport(law_id="approx-hom")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        f = RealFn(ambient, rng.uniform(-1, 1, ambient.size))
        g = RealFn(ambient, rng.uniform(-1, 1, ambient.size))
        H = random_subgroup(ambient, rng)
        eta, _ = spectral_support_level(f, H)
        defect = approx_hom_defect(f, g, H)
        bound = eta * a_norm(g) + 1e-9
        rep.record(bound - defect, {"trial": t, "seed": seed, "n": n})
    return rep


@_timed
def check_power_bound(n: int, trials: int, seed: int) -> LawReport:
    """a_norm(psi(f^k) - (psi f)^k) <= eta (k-1) M^(k-1), k in 2..5."""
    rep = LawReport(law_id="power-bound")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        k = 2 + t % 4
        f = RealFn(ambient, rng.uniform(-1, 1, ambient.size))
        H = random_subgroup(ambient, rng)
        eta, _ = spectral_support_level(f, H)
        m_norm = a_norm(f)
        fk = RealFn(ambient, f.values**k)
        pf = psi(f, H)
        pfk = RealFn(ambient, pf.values**k)
        lhs = a_norm(psi(fk, H) - pfk)
        bound = eta * (k - 1) * m_norm ** (k - 1) + 1e-9
        rep.record(bound - lhs, {"trial": t, "seed": seed, "n": n, "k": k})
    return rep


@_timed
def check_bogolyubov(
    n: int, trials: int, seed: int, delta: float = 0.5, epsilon: float = 0.25
) -> LawReport:
    """S_delta + Spec_rho(A)^perp is inside S_(delta-eps), rho = sqrt(eps/2)."""
    if not 0 < epsilon < delta <= 1:
        raise ValueError("need 0 < epsilon < delta <= 1")
    rep = LawReport(law_id="bogolyubov")
    ambient = Ambient(n)
    rho = math.sqrt(epsilon / 2.0)
    for t in range(trials):
        rng = rng_for(seed, t)
        A = _random_set(ambient, rng)
        H = bogolyubov_subgroup(A, rho)
        Sd = s_eta(A, delta)
        Sde = s_eta(A, delta - epsilon)
        Hset = PointSet(ambient, H.mask())
        shifted = sumset(Sd, Hset) if Sd.card else Sd
        ok = bool(np.all(Sde.members | ~shifted.members))
        rep.record(0.0 if ok else -1.0, {"trial": t, "seed": seed, "n": n})
    return rep


@_timed
def check_lemma13(n: int, trials: int, seed: int) -> LawReport:
    """With eta = 1/(2K^4): density of S_eta >= alpha/2 and
    sup of 1_A * 1_(S_eta) >= eta * alpha / 2."""
    rep = LawReport(law_id="lemma13")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        A = PointSet(ambient, random_structured_set_mask(ambient, rng))
        stats = set_stats(A)
        K = stats.doubling
        eta = 1.0 / (2.0 * K**4)
        S = s_eta(A, eta)
        m1 = S.density - stats.alpha / 2.0 + 1e-12
        sup = lp_norm(convolve(A.indicator(), S.indicator()), math.inf)
        m2 = sup - eta * stats.alpha / 2.0 + 1e-12
        rep.record(min(m1, m2), {"trial": t, "seed": seed, "n": n, "K": K})
    return rep


@_timed
def check_plunnecke_instances(n: int, trials: int, seed: int) -> LawReport:
    """Empirical instances of E 1_(4A) <= K^4 alpha."""
    rep = LawReport(law_id="plunnecke")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        A = _random_set(ambient, rng)
        stats = set_stats(A)
        four = iterated(A, 4)
        margin = stats.doubling**4 * stats.alpha - four.density + 1e-12
        rep.record(margin, {"trial": t, "seed": seed, "n": n, "K": stats.doubling})
    return rep


@_timed
def check_lemma14(n: int, trials: int, seed: int) -> LawReport:
    """Pigeonhole level schedule: the part of the chosen level set not
    covered by full cosets of the Bogolyubov subgroup is small."""
    rep = LawReport(law_id="lemma14")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        A = None
        for _ in range(50):
            cand = PointSet(ambient, random_structured_set_mask(ambient, rng))
            if 16.0 * set_stats(cand).doubling ** 8 <= 1e5:
                A = cand
                break
        if A is None:
            continue  # doubling too large for the level scan; resampled out
        stats = set_stats(A)
        K = max(stats.doubling, 1.0)
        alpha = stats.alpha
        eta0 = 1.0 / (2.0 * K**4)
        eps = 1.0 / (64.0 * K**12)
        L = math.ceil(1.0 / (4.0 * K**4 * eps))
        nu = fourier.iwht(
            fourier.Spectrum(ambient, wht(A.indicator()).coeffs ** 4)
        ).values
        budget = alpha / (16.0 * K**4)
        j_found = None
        prev = float(np.mean(nu >= eta0 * alpha**3 - 1e-12))
        for j in range(L):
            cur = float(np.mean(nu >= (eta0 - (j + 1) * eps) * alpha**3 - 1e-12))
            if cur - prev <= budget + 1e-12:
                j_found = j
                break
            prev = cur
        if j_found is None:
            rep.record(-1.0, {"trial": t, "seed": seed, "n": n, "K": K})
            continue
        rho = 1.0 / (16.0 * K**6)
        Hp = bogolyubov_subgroup(A, rho)
        S = PointSet(
            ambient, nu >= (eta0 - (j_found + 1) * eps) * alpha**3 - 1e-12
        )
        cover = spectral._coset_sums(S.members.astype(np.float64), Hp)
        fully = cover > Hp.size - 0.5
        X = S.members & ~fully
        margin = budget - float(np.mean(X)) + 1e-12
        rep.record(margin, {"trial": t, "seed": seed, "n": n, "K": K})
    return rep


@_timed
def check_chang_report(n: int, trials: int, seed: int, rho: float = 0.25) -> LawReport:
    """Report-only: dimension of span(Spec_rho(A)) against the Chang
    shape rho^-2 (1 + ln(1/alpha)).  Never fails."""
    rep = LawReport(law_id="chang-report")
    ambient = Ambient(n)
    ratios = []
    for t in range(trials):
        rng = rng_for(seed, t)
        A = _random_set(ambient, rng)
        dim = rref_span(ambient, spec_set(A, rho).points()).dim
        shape = rho**-2 * (1.0 + math.log(1.0 / A.density))
        ratios.append(dim / shape)
        rep.record(0.0, {"trial": t})
    rep.notes["max_dim_over_shape"] = max(ratios) if ratios else None
    rep.notes["median_dim_over_shape"] = median(ratios) if ratios else None
    return rep


@_timed
def check_connectedness(n: int, trials: int, seed: int) -> LawReport:
    """Definitional checks: subgroup-minus-zero families are 2-connected;
    independent-vector families are not, with a valid witness."""
    rep = LawReport(law_id="connectedness")
    ambient = Ambient(n)
    for t in range(trials):
        rng = rng_for(seed, t)
        if t % 2 == 0:
            H = random_subgroup(ambient, rng)
            while not 2 <= H.dim <= min(n, 4):
                H = random_subgroup(ambient, rng)
            A = PointSet.from_points(ambient, [x for x in H.elements() if x])
            ok, witness = is_arithmetically_connected(A, 2)
            rep.record(0.0 if ok and witness is None else -1.0, {"trial": t})
        else:
            k = 3 + t % max(1, n - 3)
            k = min(k, n)
            pts = [1 << i for i in range(k)]
            A = PointSet.from_points(ambient, pts)
            m = k - 1
            ok, witness = is_arithmetically_connected(A, m)
            good = not ok and witness is not None
            if good:
                # validate the witness: independent, no extra element in span
                span = rref_span(ambient, witness)
                good = span.dim == m and not any(
                    span.contains(a) for a in pts if a not in witness
                )
            rep.record(0.0 if good else -1.0, {"trial": t, "m": m})
    return rep


@_timed
def check_roundtrip(n: int, count: int, seed: int) -> LawReport:
    """decompose is exact on generated coset-ring functions."""
    rep = LawReport(law_id="roundtrip")
    ambient = Ambient(n)
    ratios = []
    fallbacks = 0
    for t in range(count):
        rng = rng_for(seed, t)
        flats = 1 + t % 4
        depth = t % 4
        f, record = gen_coset_ring(ambient, flats, depth, rng)
        expr, drep = decompose(f)
        l_triv = trivial_expr(round_to_int(f).f_int).L
        if l_triv:
            ratios.append(drep.L / l_triv)
        fallbacks += drep.fallback_used
        rep.record(
            0.0 if drep.exact else -1.0,
            {"trial": t, "seed": seed, "n": n, "record": record},
        )
    rep.notes["median_L_ratio"] = median(ratios) if ratios else None
    rep.notes["fallback_runs"] = fallbacks
    return rep


CHECKS = {
    "tiny-norm": lambda n, trials, seed: check_tiny_norm(n),
    "pd": lambda n, trials, seed: check_pd(),
    "approx-hom": check_approx_hom,
    "power-bound": check_power_bound,
    "bogolyubov": check_bogolyubov,
    "lemma13": check_lemma13,
    "plunnecke": check_plunnecke_instances,
    "lemma14": check_lemma14,
    "chang-report": check_chang_report,
    "connectedness": check_connectedness,
    "roundtrip": check_roundtrip,
}
