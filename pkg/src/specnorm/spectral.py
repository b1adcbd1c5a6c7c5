"""Spectral norm, coset-averaging projections, spectral support, and
almost-integer bookkeeping.

psi_H averages a function over cosets of H; on the Fourier side it
restricts the spectrum to the annihilator H^perp.  The greedy
spectral-support finder descends from H one codimension at a time,
each step swallowing an offending coset of ell^1 spectral mass.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import fourier
from .fourier import RealFn, Spectrum, iwht, wht
from .gf2 import Ambient, Subgroup, point_to_hex, rref_span


class NotAlmostInteger(ValueError):
    """Some value sits at distance >= 1/2 - 1e-9 from every integer."""


@dataclass(frozen=True)
class AlmostIntFn:
    """A function together with its pointwise integer rounding."""

    f: RealFn
    f_int: RealFn
    eps: float  # exact max deviation ||f - f_int||_inf


@dataclass(frozen=True)
class SupportCertificate:
    subgroup: Subgroup
    eta: float
    worst_coset_rep: int
    worst_mass: float
    steps_used: int

    def to_json(self) -> dict:
        return {
            "subgroup": self.subgroup.to_json(),
            "eta": self.eta,
            "steps": self.steps_used,
            "worst_coset": point_to_hex(self.worst_coset_rep),
            "worst_mass": self.worst_mass,
        }


def a_norm(f: RealFn) -> float:
    """Spectral (Wiener/algebra) norm: sum of |fhat(r)|."""
    return fourier.spec_lp_norm(wht(f), 1)


def psi(f: RealFn, H: Subgroup) -> RealFn:
    """Average f over cosets of H (spectrum restricted to H^perp)."""
    if f.ambient != H.ambient:
        raise fourier.AmbientMismatch("function and subgroup ambients differ")
    s = wht(f)
    restricted = np.where(H.annihilator().mask(), s.coeffs, 0.0)
    return iwht(Spectrum(f.ambient, restricted))


def _coset_sums(table: np.ndarray, S: Subgroup) -> np.ndarray:
    """out[x] = sum of table over the coset x + S, for every x."""
    g = RealFn(S.ambient, table)
    return S.size * psi(g, S).values


def coset_spectral_mass(f: RealFn, H: Subgroup, r: int) -> float:
    """Sum of |fhat| over the coset r + H^perp."""
    absf = np.abs(wht(f).coeffs)
    Hp = H.annihilator()
    return float(np.sum(absf[Hp.element_array() ^ int(r)]))


def spectral_support_level(f: RealFn, H: Subgroup) -> tuple[float, int]:
    """Worst off-H^perp coset mass of fhat and the coset's smallest rep.

    Returns (0.0, 0) when H is the full group (no off cosets exist).
    """
    Hp = H.annihilator()
    if Hp.dim == f.ambient.n:
        return 0.0, 0
    absf = np.abs(wht(f).coeffs)
    sums = _coset_sums(absf, Hp)
    off = ~Hp.mask()
    worst = float(np.max(sums[off]))
    # all members of a coset share the mass (up to rounding); take the
    # smallest word among near-maximal off frequencies as the rep
    cand = np.nonzero(off & (sums >= worst - 1e-12))[0]
    rep = int(np.min(Hp.element_array() ^ int(cand[0])))
    return worst, rep


def is_spectrally_supported(f: RealFn, H: Subgroup, eta: float):
    """eta-spectral-support test; returns (ok, worst_rep, worst_mass)."""
    if eta <= 0:
        raise ValueError("eta must be positive")
    worst, rep = spectral_support_level(f, H)
    return worst <= eta, rep, worst


def find_spectral_support(f: RealFn, H: Subgroup, eta: float) -> SupportCertificate:
    """Greedy descent to a subgroup H' <= H on which f is eta-supported.

    Each step adjoins to the dual span the smallest frequency word of
    the coset with maximal offending mass; the step count is bounded by
    ceil(a_norm(f)/eta) since offending cosets are pairwise disjoint.
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    ambient = f.ambient
    absf = np.abs(wht(f).coeffs)
    dual = H.annihilator()
    steps = 0
    while True:
        if dual.dim == ambient.n:
            worst, rep = 0.0, 0
            break
        sums = _coset_sums(absf, dual)
        off = ~dual.mask()
        worst = float(np.max(sums[off]))
        if worst <= eta:
            cand = np.nonzero(off & (sums >= worst - 1e-12))[0]
            rep = int(np.min(dual.element_array() ^ int(cand[0])))
            break
        cand = np.nonzero(off & (sums >= worst - 1e-12))[0]
        r_i = int(cand[0])  # smallest word maximizing coset mass
        dual = rref_span(ambient, list(dual.basis) + [r_i])
        steps += 1
    return SupportCertificate(
        subgroup=dual.annihilator(),
        eta=eta,
        worst_coset_rep=rep,
        worst_mass=worst,
        steps_used=steps,
    )


def approx_hom_defect(f: RealFn, g: RealFn, H: Subgroup) -> float:
    """a_norm(psi_H(fg) - psi_H(f) psi_H(g))."""
    return a_norm(psi(f * g, H) - psi(f, H) * psi(g, H))


MAX_PD_DEGREE = 12  # (2d)! stays exactly representable territory


def pd_eval(t: float, d: int) -> float:
    """The integer-detecting polynomial 4^d (2d)!^-1 prod_{j=-d}^d (t - j)."""
    if not 0 <= d <= MAX_PD_DEGREE:
        raise ValueError(f"d must be in [0, {MAX_PD_DEGREE}]")
    out = 4.0**d / math.factorial(2 * d)
    for j in range(-d, d + 1):
        out *= t - j
    return out


def pd_apply(f: RealFn, d: int) -> RealFn:
    if not 0 <= d <= MAX_PD_DEGREE:
        raise ValueError(f"d must be in [0, {MAX_PD_DEGREE}]")
    out = np.full(f.ambient.size, 4.0**d / math.factorial(2 * d))
    for j in range(-d, d + 1):
        out *= f.values - j
    return RealFn(f.ambient, out)


ROUND_GUARD = 0.5 - 1e-9


def round_to_int(f: RealFn) -> AlmostIntFn:
    """Pointwise nearest-integer rounding with exact deviation."""
    rounded = np.rint(f.values)
    eps = float(np.max(np.abs(f.values - rounded))) if f.values.size else 0.0
    if eps >= ROUND_GUARD:
        raise NotAlmostInteger(f"max deviation {eps} >= {ROUND_GUARD}")
    return AlmostIntFn(f=f, f_int=RealFn(f.ambient, rounded), eps=eps)
