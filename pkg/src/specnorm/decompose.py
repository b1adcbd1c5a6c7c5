"""Iterative rewriting of an (almost) integer-valued function with small
spectral norm as a signed sum of subgroup indicators.

Each round splits a work item f into psi_H' f and its complement, where
H' comes from the concentration-subgroup search refined by the greedy
spectral-support descent.  A part is finished when its rounding is
constant on H'-cosets, at which point it collapses to signed coset
terms and then to subgroup indicators via 1_{x+H} = 1_<H,x> - 1_H.
A guaranteed point-mass fallback keeps the procedure total.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import spectral
from .additive import ConcentrationParams, find_concentration_subgroup
from .fourier import RealFn
from .gf2 import Ambient, Subgroup, rref_span, trivial
from .spectral import (
    AlmostIntFn,
    NotAlmostInteger,
    a_norm,
    find_spectral_support,
    psi,
    round_to_int,
)


@dataclass(frozen=True)
class SubgroupTerm:
    sign: int  # +1 or -1
    H: Subgroup


@dataclass(frozen=True)
class CosetRingExpr:
    ambient: Ambient
    terms: tuple[SubgroupTerm, ...]

    @property
    def L(self) -> int:
        return len(self.terms)

    def to_json(self) -> list[dict]:
        return [{"sign": t.sign, "basis": t.H.to_json()} for t in self.terms]


@dataclass(frozen=True)
class SignedCosetTerm:
    coeff: int
    rep: int
    H: Subgroup


def default_eta(eps: float, m_norm: float) -> float:
    """Small in M, linear in eps; halved on rounding failures."""
    return eps / (16.0 * (m_norm + 1.0) ** 2 * max(1.0, math.log2(m_norm + 1.0)))


@dataclass(frozen=True)
class DecomposeParams:
    eps0: float = 2.0**-20
    eta_of: callable = default_eta
    mode: str = "heuristic"  # heuristic | exhaustive | fallback-only
    max_depth: int = 8
    seed: int = 0
    max_eta_retries: int = 6
    concentration: ConcentrationParams = field(default_factory=ConcentrationParams)

    def __post_init__(self):
        if not 0 < self.eps0 < 0.5:
            raise ValueError("eps0 must lie in (0, 1/2)")
        if self.max_depth < 1:
            raise ValueError("max_depth must be >= 1")
        if self.mode not in ("heuristic", "exhaustive", "fallback-only"):
            raise ValueError(f"unknown mode {self.mode!r}")


@dataclass
class DecomposeReport:
    L: int = 0
    depth: int = 0
    splits: list = field(default_factory=list)
    fallback_used: bool = False
    exact: bool = False

    def to_json(self) -> dict:
        return {
            "L": self.L,
            "depth": self.depth,
            "splits": self.splits,
            "fallback_used": self.fallback_used,
            "exact": self.exact,
        }


@dataclass(frozen=True)
class PartOutcome:
    fn: AlmostIntFn
    finished: bool
    terms: tuple[SignedCosetTerm, ...] | None


@dataclass(frozen=True)
class SplitOutcome:
    parts: tuple[PartOutcome, ...]
    subgroup: Subgroup | None
    eta: float
    a_norm_before: float
    a_norm_parts: tuple[float, ...]


def _constant_on_cosets(f_int: RealFn, H: Subgroup) -> bool:
    avg = psi(f_int, H)
    return bool(np.max(np.abs(f_int.values - avg.values)) < 0.5)


def _extract_coset_terms(f_int: RealFn, H: Subgroup) -> tuple[SignedCosetTerm, ...]:
    vals = np.rint(f_int.values).astype(np.int64)
    elems = H.element_array()
    seen = np.zeros(f_int.ambient.size, dtype=bool)
    terms = []
    for x in range(f_int.ambient.size):
        if seen[x]:
            continue
        coset = elems ^ x
        seen[coset] = True
        c = int(vals[x])
        if c != 0:
            terms.append(SignedCosetTerm(coeff=c, rep=int(coset.min()), H=H))
    return tuple(terms)


def coset_to_subgroups(term: SignedCosetTerm) -> list[SubgroupTerm]:
    """1_{x+H} = 1_<H,x> - 1_H when x is outside H, repeated |coeff| times."""
    s = 1 if term.coeff > 0 else -1
    out = []
    if term.H.contains(term.rep):
        out.extend([SubgroupTerm(s, term.H)] * abs(term.coeff))
    else:
        bigger = rref_span(term.H.ambient, list(term.H.basis) + [term.rep])
        for _ in range(abs(term.coeff)):
            out.append(SubgroupTerm(s, bigger))
            out.append(SubgroupTerm(-s, term.H))
    return out


def evaluate(expr: CosetRingExpr) -> RealFn:
    out = np.zeros(expr.ambient.size)
    for t in expr.terms:
        out[t.H.element_array()] += t.sign
    return RealFn(expr.ambient, out)


def trivial_expr(f_int: RealFn) -> CosetRingExpr:
    """Point-mass fallback: every nonzero value as cosets of {0}."""
    vals = np.rint(f_int.values).astype(np.int64)
    triv = trivial(f_int.ambient)
    terms: list[SubgroupTerm] = []
    for x in np.nonzero(vals)[0]:
        terms.extend(
            coset_to_subgroups(SignedCosetTerm(int(vals[x]), int(x), triv))
        )
    return CosetRingExpr(f_int.ambient, tuple(terms))


def inductive_step(
    f: AlmostIntFn,
    eta: float,
    H_hint: Subgroup | None = None,
    concentration: ConcentrationParams = ConcentrationParams(),
) -> SplitOutcome:
    """One round: split f into a coset-average part and its complement.

    Raises NotAlmostInteger when eta is too coarse for this f (caller
    retries with a smaller eta).
    """
    if eta <= 0:
        raise ValueError("eta must be positive")
    m_norm = a_norm(f.f)
    if m_norm <= 0.5:
        # rounding of f is identically zero: nothing to represent
        empty = PartOutcome(fn=f, finished=True, terms=())
        return SplitOutcome(
            parts=(empty,),
            subgroup=None,
            eta=eta,
            a_norm_before=m_norm,
            a_norm_parts=(m_norm,),
        )
    H = H_hint
    if H is None:
        H, _ = find_concentration_subgroup(f, concentration)
    cert = find_spectral_support(f.f, H, eta)
    Hp = cert.subgroup
    f1 = psi(f.f, Hp)
    f2 = f.f - f1
    parts = []
    norms = []
    for g in (f1, f2):
        rounded = round_to_int(g)
        norms.append(a_norm(g))
        if _constant_on_cosets(rounded.f_int, Hp):
            parts.append(
                PartOutcome(
                    fn=rounded,
                    finished=True,
                    terms=_extract_coset_terms(rounded.f_int, Hp),
                )
            )
        else:
            parts.append(PartOutcome(fn=rounded, finished=False, terms=None))
    return SplitOutcome(
        parts=tuple(parts),
        subgroup=Hp,
        eta=eta,
        a_norm_before=m_norm,
        a_norm_parts=tuple(norms),
    )


def decompose(
    f: RealFn, params: DecomposeParams = DecomposeParams()
) -> tuple[CosetRingExpr, DecomposeReport]:
    base = round_to_int(f)
    if base.eps > params.eps0:
        raise NotAlmostInteger(
            f"deviation {base.eps} exceeds the eps0 budget {params.eps0}"
        )
    report = DecomposeReport()
    terms: list[SubgroupTerm] = []
    m0 = a_norm(f)
    depth_cap = max(2 * math.ceil(m0), params.max_depth)

    if params.mode == "fallback-only":
        expr = trivial_expr(base.f_int)
        report.fallback_used = True
        report.L = expr.L
        report.exact = bool(
            np.array_equal(
                np.rint(evaluate(expr).values), np.rint(base.f_int.values)
            )
        )
        return expr, report

    conc = params.concentration
    if params.mode == "exhaustive":
        conc = ConcentrationParams(
            rhos=conc.rhos,
            beam_top=conc.beam_top,
            beam_max_size=conc.beam_max_size,
            max_codim=conc.max_codim,
            exhaustive=True,
        )

    # work items: (almost-int part, eps budget level, depth); largest
    # a_norm first for bounded queue growth and comparable reports
    queue: list[tuple[float, AlmostIntFn, float, int]] = [
        (a_norm(f), base, max(base.eps, params.eps0), 0)
    ]
    while queue:
        queue.sort(key=lambda item: -item[0])
        norm_before, part, eps_level, depth = queue.pop(0)
        report.depth = max(report.depth, depth)

        if depth >= depth_cap:
            terms.extend(trivial_expr(part.f_int).terms)
            report.fallback_used = True
            continue

        eta = params.eta_of(eps_level, norm_before)
        outcome = None
        for _ in range(params.max_eta_retries + 1):
            try:
                outcome = inductive_step(part, eta, concentration=conc)
                break
            except NotAlmostInteger:
                eta /= 2.0
        if outcome is None:
            terms.extend(trivial_expr(part.f_int).terms)
            report.fallback_used = True
            continue

        report.splits.append(
            {
                "a_norm_before": outcome.a_norm_before,
                "a_norm_f1": outcome.a_norm_parts[0]
                if len(outcome.a_norm_parts) > 1
                else outcome.a_norm_before,
                "a_norm_f2": outcome.a_norm_parts[1]
                if len(outcome.a_norm_parts) > 1
                else 0.0,
                "eta": outcome.eta,
                "eps_level": eps_level,
            }
        )

        for p, p_norm in zip(outcome.parts, outcome.a_norm_parts):
            if p.finished:
                for ct in p.terms:
                    terms.extend(coset_to_subgroups(ct))
            elif p_norm > norm_before - 0.25:
                # stall: no progress and not finished
                terms.extend(trivial_expr(p.fn.f_int).terms)
                report.fallback_used = True
            else:
                queue.append(
                    (p_norm, p.fn, max(p.fn.eps, eps_level), depth + 1)
                )

    expr = CosetRingExpr(f.ambient, tuple(terms))
    report.L = expr.L
    got = np.rint(evaluate(expr).values).astype(np.int64)
    want = np.rint(base.f_int.values).astype(np.int64)
    report.exact = bool(np.array_equal(got, want))
    return expr, report


def decomposition_json(
    expr: CosetRingExpr, report: DecomposeReport
) -> dict:
    return {
        "n": expr.ambient.n,
        "L": expr.L,
        "terms": expr.to_json(),
        "report": report.to_json(),
        "exact": report.exact,
    }
