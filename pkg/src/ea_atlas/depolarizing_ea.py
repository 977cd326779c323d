"""Entanglement annihilation of local and global depolarizing noise.

Exact regions (2x2, 3x2), the sufficient quadratic region, closed-form
thresholds, explicit resolutions ``sum_k w_k (EB_k o Lambda_k)``, the
biseparable Choi decomposition for two qubits, and PT robustness curves.

Resolution terms follow one pattern: a ``Lambda_{s,t}`` positive map followed
by an entanglement-breaking ``Phi_p`` on one side. Transfer matrices of all
maps involved are diagonal, with three sectors (A-only, B-only, both), so a
term ``(Phi_p (x) Id) o Lambda_{s,t}`` contributes ``(p s, s, p t)`` and
``(Id (x) Phi_p) o Lambda_{s,t}`` contributes ``(s, p s, p t)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np
from scipy.optimize import brentq

from .channels import (
    Channel,
    LambdaST,
    compose,
    depolarizing,
    depolarizing_global,
    depolarizing_local,
    eb_range,
    identity_channel,
    lambda_st,
    tensor,
)
from .criteria import (
    Classification,
    Criterion,
    Status,
    bell_candidates,
    depolarizing_parameter,
    local_depolarizing_parameters,
    output_pt_value,
)
from .linalg import STRUCTURAL_TOL, DimPair, max_entangled, min_eig, partial_transpose

RECONSTRUCTION_TOL = 1e-10


class InfeasibleError(ValueError):
    """No resolution of the requested form; ``constraint`` names what failed."""

    def __init__(self, constraint: str, detail: str = ""):
        self.constraint = constraint
        super().__init__(f"{constraint}: {detail}" if detail else constraint)


# -- thresholds -------------------------------------------------------------

def q_ea_local(d: int) -> float:
    return (d - 2 + d * math.sqrt(2 * d / (d + 1))) / ((d - 1) * (d + 2))


def q_ea_global(d: int) -> float:
    return (d + 2) / ((d + 1) * (d * d - d + 2))


def q_mes_local(d: int) -> float:
    return 1 / math.sqrt(d + 1)


def q_mes_global(d: int) -> float:
    return 1 / (d + 1)


def q_nea_local(d: int) -> float:
    r3 = math.sqrt(3)
    return (1 + r3) / (d + 1 + r3)


def q_nea_global(d: int) -> float:
    return 2 / (d * d + 2)


@dataclass(frozen=True)
class ThresholdTable:
    d: int
    q_EA_local: float
    q_EA_global: float
    q_MES_local: float
    q_MES_global: float
    q_nEA_local: float
    q_nEA_global: float

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__ if k != "d"}


def thresholds(d: int) -> ThresholdTable:
    """Closed-form thresholds for ``d x d``; at ``d = 2`` the EA and nEA values meet."""
    if int(d) != d or d < 2:
        raise ValueError(f"thresholds need an integer d >= 2, got {d!r}")
    d = int(d)
    return ThresholdTable(d, q_ea_local(d), q_ea_global(d), q_mes_local(d),
                          q_mes_global(d), q_nea_local(d), q_nea_global(d))


# -- regions ----------------------------------------------------------------

def sufficient_region(d: int, q1: float, q2: float, slack: float = STRUCTURAL_TOL) -> bool:
    """``(d^2 - 1) q1 q2 <= 1 + (d - 2)(d + 1)/(d + 2) (q1 + q2)``."""
    return sufficient_margin(d, q1, q2) >= -slack


def sufficient_margin(d: int, q1: float, q2: float) -> float:
    return 1 + (d - 2) * (d + 1) / (d + 2) * (q1 + q2) - (d * d - 1) * q1 * q2


def _orient(dims: DimPair, q1, q2):
    """Map 2x3 onto 3x2 by swapping the factors."""
    if dims.as_tuple() == (2, 3):
        return DimPair(3, 2), q2, q1, True
    return dims, q1, q2, False


def exact_margin(dims: DimPair, q1=None, q2=None, q=None) -> float:
    """Nonnegative exactly on the EA side of the closed-form boundary."""
    if q is not None:
        if dims.as_tuple() == (2, 2):
            return 1 / 3 - q
        if dims.as_tuple() in ((3, 2), (2, 3)):
            return 1 / 4 - q
    else:
        dims, q1, q2, _ = _orient(dims, q1, q2)
        if dims.as_tuple() == (2, 2):
            return 1 / 3 - q1 * q2
        if dims.as_tuple() == (3, 2):
            return 2 - q1 * (9 * q2 - 1)
    raise ValueError(f"no exact region for dims {dims}; supported: 2x2, 3x2, 2x3")


def _target(dims: DimPair, q1=None, q2=None, q=None) -> Channel:
    if q is not None:
        return depolarizing_global(dims, q)
    return depolarizing_local(dims, q1, q2)


def _best_candidate(ch: Channel):
    best = None
    for psi in bell_candidates(ch.in_pair):
        value, w = output_pt_value(ch, psi)
        if best is None or value < best[0]:
            best = (value, psi, w)
    return best


def exact_region(dims: DimPair, q1=None, q2=None, *, q=None,
                 slack: float = STRUCTURAL_TOL) -> Classification:
    """Closed-form EA verdict for local (``q1, q2``) or global (``q``) noise.

    The ``no`` side carries the Bell-type input whose output has the most
    negative partial transpose.
    """
    if (q is None) == (q1 is None or q2 is None):
        raise ValueError("give either q1 and q2 (local) or q (global)")
    margin = exact_margin(dims, q1, q2, q)
    if margin >= -slack:
        return Classification(Criterion.EA, Status.CERTIFIED_YES, tolerance=slack, method="exact")
    value, psi, w = _best_candidate(_target(dims, q1, q2, q))
    cert = {"kind": "input_state", "input": psi, "witness": w, "value": value}
    return Classification(Criterion.EA, Status.CERTIFIED_NO, cert, slack, "exact")


# -- resolutions -------------------------------------------------------------

@dataclass(frozen=True)
class ResolutionTerm:
    """``weight * (EB o Lambda)`` with ``EB = Phi_p`` on ``side`` and identity elsewhere."""

    weight: float
    lam: LambdaST
    p: float
    side: str

    def eb_channel(self) -> Channel:
        dims = self.lam.dims
        if self.side == "A":
            return tensor(depolarizing(dims.dA, self.p), identity_channel(dims.dB))
        return tensor(identity_channel(dims.dA), depolarizing(dims.dB, self.p))

    def channel(self) -> Channel:
        return compose(self.eb_channel(), lambda_st(self.lam))

    def eb_ok(self, tol: float = STRUCTURAL_TOL) -> bool:
        d = self.lam.dims.dA if self.side == "A" else self.lam.dims.dB
        lo, hi = eb_range(d)
        return lo - tol <= self.p <= hi + tol

    def sectors(self) -> tuple[float, float, float]:
        s, t, p = self.lam.s, self.lam.t, self.p
        return (p * s, s, p * t) if self.side == "A" else (s, p * s, p * t)

    def summary(self) -> dict:
        return {"weight": self.weight, "s": self.lam.s, "t": self.lam.t, "p": self.p, "side": self.side}


@dataclass(frozen=True, eq=False)
class Resolution:
    terms: tuple[ResolutionTerm, ...]
    target: Channel
    method: str = ""

    def reconstruct(self) -> np.ndarray:
        return sum(term.weight * term.channel().choi for term in self.terms)

    def residual(self) -> float:
        return float(np.max(np.abs(self.reconstruct() - self.target.choi)))

    def failures(self, tol: float = RECONSTRUCTION_TOL) -> list[str]:
        """Names of violated invariants (empty when the resolution certifies EA)."""
        out = []
        weights = [t.weight for t in self.terms]
        if min(weights) < -STRUCTURAL_TOL or abs(sum(weights) - 1) > STRUCTURAL_TOL:
            out.append("weights")
        if not all(t.lam.certified_positive() for t in self.terms):
            out.append("positivity")
        if not all(t.eb_ok() for t in self.terms):
            out.append("eb_range")
        if self.residual() > tol:
            out.append("reconstruction")
        return out

    def check(self, tol: float = RECONSTRUCTION_TOL) -> "Resolution":
        bad = self.failures(tol)
        if bad:
            raise InfeasibleError(bad[0], f"resolution fails {', '.join(bad)}")
        return self

    def summary(self) -> dict:
        return {"kind": "resolution", "method": self.method,
                "terms": [t.summary() for t in self.terms]}


def _bound(d: int, s):
    return 1 / (d - 1) + (1 - 1 / (d - 1)) * s


def _term(weight, dims, s, t, p, side):
    return ResolutionTerm(float(weight), LambdaST(dims, float(s), float(t)), float(p), side)


def _pair_terms(dims, mu, p1, p2, s1, s2, t1, t2):
    terms = []
    if mu > 0:
        terms.append(_term(mu, dims, s1, t1, p1, "A"))
    if mu < 1:
        terms.append(_term(1 - mu, dims, s2, t2, p2, "B"))
    return tuple(terms)


def _single_side(qa, qb, qab, dims, side, grid=64):
    """One-term resolution ``(Phi_p on side) o Lambda``; ``None`` if impossible."""
    d = max(dims.as_tuple())
    q_eb, q_free = (qa, qb) if side == "A" else (qb, qa)
    s = q_free
    if not (-STRUCTURAL_TOL <= s <= 1 + STRUCTURAL_TOL):
        return None
    lo, hi = eb_range(dims.dA if side == "A" else dims.dB)
    if abs(s) > STRUCTURAL_TOL:
        candidates = [q_eb / s]
    elif abs(q_eb) <= STRUCTURAL_TOL:
        candidates = list(np.linspace(lo, hi, grid))
    else:
        return None
    for p in candidates:
        if not lo - STRUCTURAL_TOL <= p <= hi + STRUCTURAL_TOL:
            continue
        if abs(p) > STRUCTURAL_TOL:
            t = qab / p
        elif abs(qab) <= STRUCTURAL_TOL:
            t = s
        else:
            continue
        if s - STRUCTURAL_TOL <= t <= _bound(d, s) + STRUCTURAL_TOL:
            return p, s, t
    return None


def _grid_solutions(qa, qb, qab, dims, mu, p1, p2):
    """Vectorized exact solve for ``s`` and interval test for ``t``.

    Returns arrays ``(violation, s1, s2, t1, t2)``; a violation of 0 means the
    parameters give an exact, positive, EB-valid resolution.
    """
    d = max(dims.as_tuple())
    det = mu * (1 - mu) * (p1 * p2 - 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = ((1 - mu) * p2 * qa - (1 - mu) * qb) / det
        s2 = (mu * p1 * qb - mu * qa) / det
    a1, a2 = mu * p1, (1 - mu) * p2
    b1, b2 = _bound(d, s1), _bound(d, s2)
    lo1, hi1 = np.minimum(a1 * s1, a1 * b1), np.maximum(a1 * s1, a1 * b1)
    lo2, hi2 = np.minimum(a2 * s2, a2 * b2), np.maximum(a2 * s2, a2 * b2)
    lo, hi = lo1 + lo2, hi1 + hi2
    viol = (
        np.maximum(0, -s1) + np.maximum(0, s1 - 1)
        + np.maximum(0, -s2) + np.maximum(0, s2 - 1)
        + np.maximum(0, lo - qab) + np.maximum(0, qab - hi)
    )
    viol = np.where(np.isfinite(viol), viol, np.inf)
    span = hi - lo
    with np.errstate(divide="ignore", invalid="ignore"):
        lam = np.clip(np.where(span > 0, (qab - lo) / span, 0.5), 0, 1)
    # endpoint giving lo_i, then move toward hi_i by the common fraction lam
    t1_lo = np.where(a1 >= 0, s1, b1)
    t1_hi = np.where(a1 >= 0, b1, s1)
    t2_lo = np.where(a2 >= 0, s2, b2)
    t2_hi = np.where(a2 >= 0, b2, s2)
    t1 = t1_lo + lam * (t1_hi - t1_lo)
    t2 = t2_lo + lam * (t2_hi - t2_lo)
    return viol, s1, s2, t1, t2


@dataclass(frozen=True)
class MatchingSearch:
    """Settings for the resolution search over ``(mu, p1, p2)``."""

    grid: int = 41
    refine_starts: int = 8
    refine_tol: float = 1e-13
    max_steps: int = 4000


def solve_matching(qa, qb, qab, dims: DimPair, cfg: MatchingSearch | None = None,
                   prefer=None):
    """Find ``(mu, p1, p2, s1, s2, t1, t2)`` reproducing sectors ``(qa, qb, qab)``.

    Single-term resolutions (``mu`` in {0, 1}) are tried first, then ``prefer``
    (a list of ``(mu, p1, p2)``), then a grid over the parameter box, and last
    a coordinate descent on the violation from the best grid points.
    """
    cfg = cfg or MatchingSearch()
    for side, mu in (("A", 1.0), ("B", 0.0)):
        hit = _single_side(qa, qb, qab, dims, side)
        if hit is not None:
            p, s, t = hit
            return (mu, p, p, s, s, t, t) if side == "A" else (mu, p, p, s, s, t, t)
    lo1, hi1 = eb_range(dims.dA)
    lo2, hi2 = eb_range(dims.dB)

    def pick(mu, p1, p2):
        mu, p1, p2 = np.broadcast_arrays(*(np.asarray(x, float) for x in (mu, p1, p2)))
        viol, s1, s2, t1, t2 = _grid_solutions(qa, qb, qab, dims, mu, p1, p2)
        return viol, (mu, p1, p2, s1, s2, t1, t2)

    if prefer:
        arr = np.array(prefer, dtype=float)
        viol, sol = pick(arr[:, 0], arr[:, 1], arr[:, 2])
        ok = np.flatnonzero(viol <= 0)
        if ok.size:
            return tuple(float(x[ok[0]]) for x in sol)

    n = cfg.grid
    mus = np.linspace(0, 1, n + 2)[1:-1]
    m, a, b = np.meshgrid(mus, np.linspace(lo1, hi1, n), np.linspace(lo2, hi2, n), indexing="ij")
    viol, sol = pick(m.ravel(), a.ravel(), b.ravel())
    ok = np.flatnonzero(viol <= 0)
    if ok.size:
        # widest margin: prefer interior s values
        s1, s2 = sol[3][ok], sol[4][ok]
        margin = np.minimum(np.minimum(s1, 1 - s1), np.minimum(s2, 1 - s2))
        i = ok[int(np.argmax(margin))]
        return tuple(float(x[i]) for x in sol)

    box = np.array([[0.0, 1.0], [lo1, hi1], [lo2, hi2]])
    order = np.argsort(viol)[: cfg.refine_starts]
    for start in order:
        x = np.array([m.ravel()[start], a.ravel()[start], b.ravel()[start]])
        found = _coordinate_descent(lambda v: float(pick(*v)[0]), x, box, cfg)
        if found is not None:
            v, s = pick(*found)
            return tuple(float(z) for z in s)
    return None


def _coordinate_descent(score, x, box, cfg: MatchingSearch):
    step = (box[:, 1] - box[:, 0]) / (2 * cfg.grid)
    best = score(x)
    for _ in range(cfg.max_steps):
        if best <= 0:
            return x
        moved = False
        for k in range(len(x)):
            for sign in (1, -1):
                y = x.copy()
                y[k] = np.clip(y[k] + sign * step[k], box[k, 0], box[k, 1])
                if k == 0:
                    y[k] = np.clip(y[k], 1e-9, 1 - 1e-9)
                val = score(y)
                if val < best:
                    x, best, moved = y, val, True
                    break
        if not moved:
            step = step / 2
            if np.max(step) < cfg.refine_tol:
                break
    return x if best <= 0 else None


def _resolution_from(params, dims, target, method) -> Resolution:
    mu, p1, p2, s1, s2, t1, t2 = params
    return Resolution(_pair_terms(dims, mu, p1, p2, s1, s2, t1, t2), target, method)


def boundary_parameters(d: int, q1: float, q2: float):
    """Boundary closed forms with ``p = 1/(d+1)`` and saturated ``t``."""
    p = 1 / (d + 1)
    mu = 0.5 + (d + 1) / (2 * d) * (q2 - q1)
    k = 2 * (d + 1) / (d + 2)
    with np.errstate(divide="ignore", invalid="ignore"):
        s1 = k * ((d + 1) * q2 - q1) / np.float64(d + (d + 1) * (q2 - q1))
        s2 = k * ((d + 1) * q1 - q2) / np.float64(d + (d + 1) * (q1 - q2))
    return mu, p, p, s1, s2, _bound(d, s1), _bound(d, s2)


def local_resolution(d: int, q1: float, q2: float, cfg: MatchingSearch | None = None,
                     boundary_tol: float = 1e-9) -> Resolution:
    """Resolution of ``Phi_q1 (x) Phi_q2`` on ``d x d``; raises :class:`InfeasibleError`.

    On the quadratic boundary the closed forms are used; elsewhere the
    matching system is solved with the closed-form ``mu`` and ``p`` tried first.
    """
    if d < 2:
        raise ValueError("d must be >= 2")
    margin = sufficient_margin(d, q1, q2)
    if margin < -STRUCTURAL_TOL:
        raise InfeasibleError("sufficient_region", f"margin {margin:.3e} < 0")
    dims = DimPair(d, d)
    target = depolarizing_local(dims, q1, q2)
    closed = boundary_parameters(d, q1, q2) if abs(margin) <= boundary_tol else None
    if closed is not None and 0 <= closed[0] <= 1:
        res = _resolution_from(closed, dims, target, "boundary_closed_form")
        if not res.failures():
            return res
    mu0, p, _ = boundary_parameters(d, q1, q2)[:3]
    prefer = [(min(max(mu0, 1e-9), 1 - 1e-9), p, p)]
    params = solve_matching(q1, q2, q1 * q2, dims, cfg, prefer)
    if params is None:
        raise InfeasibleError("matching", "no (mu, p, s, t) satisfies the sector equations")
    return _resolution_from(params, dims, target, "matching").check()


def global_resolution(d: int, q: float) -> Resolution:
    """``1/2 (Phi_p (x) Id + Id (x) Phi_p) o Lambda_{s,t}`` with ``p = 1/(d+1)``.

    Matching gives ``s = 2 q (d+1)/(d+2)`` and ``t = q (d+1)``, i.e.
    ``t = (d+2) s / 2``.
    """
    if q > q_ea_global(d) + STRUCTURAL_TOL:
        raise InfeasibleError("threshold", f"q={q} above {q_ea_global(d)}")
    p = 1 / (d + 1)
    s = 2 * q * (d + 1) / (d + 2)
    t = (d + 2) * s / 2
    dims = DimPair(d, d)
    terms = (_term(0.5, dims, s, t, p, "A"), _term(0.5, dims, s, t, p, "B"))
    res = Resolution(terms, depolarizing_global(dims, q), "global_closed_form")
    return res.check()


def global_resolution_full_t(d: int, q: float) -> Resolution:
    """The same ansatz with ``t = (d+2) s``; kept to document that it fails."""
    p = 1 / (d + 1)
    s = 2 * q * (d + 1) / (d + 2)
    dims = DimPair(d, d)
    terms = (_term(0.5, dims, s, (d + 2) * s, p, "A"), _term(0.5, dims, s, (d + 2) * s, p, "B"))
    return Resolution(terms, depolarizing_global(dims, q), "global_full_t")


def _resolution_or_none(qa, qb, qab, dims, target, cfg, method):
    params = solve_matching(qa, qb, qab, dims, cfg)
    if params is None:
        return None
    res = _resolution_from(params, dims, target, method)
    return None if res.failures() else res


def local_resolution_3x2(q1: float, q2: float, cfg: MatchingSearch | None = None):
    """Numerical resolution for qutrit (``q1``) x qubit (``q2``); ``None`` when not found."""
    dims = DimPair(3, 2)
    return _resolution_or_none(q1, q2, q1 * q2, dims, depolarizing_local(dims, q1, q2),
                               cfg, "optimizer_3x2")


def global_resolution_3x2(q: float, cfg: MatchingSearch | None = None):
    dims = DimPair(3, 2)
    return _resolution_or_none(q, q, q, dims, depolarizing_global(dims, q), cfg, "optimizer_3x2")


def _bisect_certified(found, lo, hi, resolution):
    """Largest value in ``[lo, hi]`` with ``found`` true, to ``resolution``."""
    if not found(lo):
        return None
    if found(hi):
        return hi
    while hi - lo > resolution:
        mid = 0.5 * (lo + hi)
        if found(mid):
            lo = mid
        else:
            hi = mid
    return lo


def max_certified_q(resolution: float = 1e-3, cfg: MatchingSearch | None = None) -> float:
    """Supremum of global 3x2 noise levels certified by the optimizer."""
    cfg = cfg or MatchingSearch(grid=61)
    return _bisect_certified(lambda q: global_resolution_3x2(q, cfg) is not None,
                             0.0, 0.25, resolution)


def max_certified_q2_3x2(q1: float, resolution: float = 1e-3, cfg: MatchingSearch | None = None):
    """Largest qubit noise ``q2`` certified by the optimizer at fixed qutrit ``q1``."""
    return _bisect_certified(lambda q2: local_resolution_3x2(q1, q2, cfg) is not None,
                             0.0, 1.0, resolution)


# -- biseparable decomposition (two qubits) ------------------------------------

class Family(str, Enum):
    SIC = "SIC"
    MUB = "MUB"


def _bloch_vector(n) -> np.ndarray:
    theta = math.acos(max(-1.0, min(1.0, n[2])))
    phi = math.atan2(n[1], n[0])
    return np.array([math.cos(theta / 2), np.exp(1j * phi) * math.sin(theta / 2)])


def family_vectors(family: Family) -> list[np.ndarray]:
    """Tetrahedral SIC fiducials or the six Pauli eigenvectors, overlap-checked."""
    family = Family(family)
    if family is Family.SIC:
        r = math.sqrt(2) / 3
        blochs = [(0, 0, 1), (2 * r, 0, -1 / 3), (-r, math.sqrt(2 / 3), -1 / 3),
                  (-r, -math.sqrt(2 / 3), -1 / 3)]
        vecs = [_bloch_vector(n) for n in blochs]
        for i in range(4):
            for j in range(i + 1, 4):
                if abs(abs(np.vdot(vecs[i], vecs[j])) ** 2 - 1 / 3) > STRUCTURAL_TOL:
                    raise AssertionError("SIC overlap condition failed")
        return vecs
    axes = [(1, 0, 0), (-1, 0, 0), (0, 1, 0), (0, -1, 0), (0, 0, 1), (0, 0, -1)]
    vecs = [_bloch_vector(n) for n in axes]
    for i in range(6):
        for j in range(i + 1, 6):
            want = 0.0 if i // 2 == j // 2 else 0.5
            if abs(abs(np.vdot(vecs[i], vecs[j])) ** 2 - want) > STRUCTURAL_TOL:
                raise AssertionError("MUB overlap condition failed")
    return vecs


def _perp(v):
    return np.array([-np.conj(v[1]), np.conj(v[0])])


def biseparable_constants(q1: float, q2: float):
    """``(mu, a, b, c)``; ``a`` is fixed by matching the ``P+ (x) P+`` coefficient."""
    den = q1 + q2 - 2 * q1 * q2
    mu = 0.5 if abs(den) <= STRUCTURAL_TOL else (1 - q1) * q2 / den
    a = 0.5 * (q1 + q2 + 2 * q1 * q2)
    b = 0.5 * (q1 + q2 - 4 * q1 * q2)
    c = (1 - q1 - q2 + q1 * q2) / 8
    return mu, a, b, c


def biseparable_region(q1: float, q2: float) -> bool:
    return 1 + 3 * (q1 + q2) - 15 * q1 * q2 >= -STRUCTURAL_TOL


def _to_abab(m, labels):
    """Reorder a 16x16 operator on qubits ``labels`` into ``A B A' B'`` order."""
    order = [labels.index(x) for x in ("A", "B", "a", "b")]
    t = np.asarray(m).reshape([2] * 8)
    return t.transpose(order + [k + 4 for k in order]).reshape(16, 16)


@dataclass(frozen=True, eq=False)
class BiseparableDecomposition:
    """Choi of ``Phi_q1 (x) Phi_q2`` as a mixture of states product across
    ``A | B A' B'`` (weight ``mu``) and ``B | A A' B'`` (weight ``1 - mu``)."""

    family: Family
    vectors: tuple
    q1: float
    q2: float
    mu: float
    a: float
    b: float
    c: float
    target: Channel = field(repr=False)

    def components(self):
        """``(weight, labels, factor, rest)`` with the state ``factor (x) rest`` on ``labels``."""
        pplus = np.outer(max_entangled(2), max_entangled(2))
        k = len(self.vectors)
        out = []
        for v in self.vectors:
            vs, vp = v.conj(), _perp(v).conj()
            local = self.a * np.outer(vs, vs.conj()) + self.b * np.outer(vp, vp.conj())
            rest = np.kron(local, pplus) + self.c * np.eye(8)
            pv = np.outer(v, v.conj())
            out.append((self.mu / k, ["A", "a", "B", "b"], pv, rest))
            out.append(((1 - self.mu) / k, ["B", "b", "A", "a"], pv, rest))
        return out

    def reconstruct(self) -> np.ndarray:
        return sum(w * _to_abab(np.kron(f, r), lab) for w, lab, f, r in self.components())

    def residual(self) -> float:
        return float(np.max(np.abs(self.reconstruct() - self.target.choi)))

    def min_component_eig(self) -> float:
        return min(min_eig(r)[0] for _, _, _, r in self.components())

    def summary(self) -> dict:
        return {"kind": "biseparable", "family": self.family.value, "mu": self.mu,
                "a": self.a, "b": self.b, "c": self.c}


def biseparable_decomposition(q1: float, q2: float, family=Family.SIC,
                              tol: float = RECONSTRUCTION_TOL) -> BiseparableDecomposition:
    mu, a, b, c = biseparable_constants(q1, q2)
    for name, value in (("c", c), ("a+c", a + c), ("b+c", b + c)):
        if value < -STRUCTURAL_TOL:
            raise InfeasibleError(name, f"{name} = {value:.3e} < 0")
    if not -STRUCTURAL_TOL <= mu <= 1 + STRUCTURAL_TOL:
        raise InfeasibleError("mu", f"mu = {mu:.6g} outside [0, 1]")
    fam = Family(family)
    dec = BiseparableDecomposition(fam, tuple(family_vectors(fam)), q1, q2, mu, a, b, c,
                                   depolarizing_local(DimPair(2, 2), q1, q2))
    res = dec.residual()
    if res > tol:
        raise InfeasibleError("reconstruction", f"residual {res:.3e}")
    return dec


# -- robustness ----------------------------------------------------------------

def gamma_state(d: int) -> np.ndarray:
    """``(|11> + |dd>)/sqrt(2)``, labels counted from 1."""
    g = np.zeros(d * d, dtype=complex)
    g[0] = g[-1] = 1 / math.sqrt(2)
    return g


@dataclass(frozen=True)
class RobustnessPoint:
    d: int
    q: float
    mes_local_pt_min: float
    mes_global_pt_min: float
    gamma_local_pt_min: float
    gamma_global_pt_min: float


CURVES = ("mes_local", "mes_global", "gamma_local", "gamma_global")


def _local_output(rho, d, q):
    """``(Phi_q (x) Phi_q)[rho]`` evaluated from the definition."""
    r = rho.reshape(d, d, d, d)
    tr_a = np.einsum("ibic->bc", r)
    tr_b = np.einsum("ajcj->ac", r)
    eye = np.eye(d) / d
    return (q * q * rho + q * (1 - q) * (np.kron(tr_b, eye) + np.kron(eye, tr_a))
            + (1 - q) ** 2 * np.trace(rho) * np.eye(d * d) / (d * d))


def _global_output(rho, d, q):
    return q * rho + (1 - q) * np.trace(rho) * np.eye(d * d) / (d * d)


def pt_min(curve: str, d: int, q: float) -> float:
    psi = max_entangled(d) if curve.startswith("mes") else gamma_state(d)
    rho = np.outer(psi, psi.conj())
    out = _local_output(rho, d, q) if curve.endswith("local") else _global_output(rho, d, q)
    return min_eig(partial_transpose(out, DimPair(d, d), "B"))[0]


def robustness_curves(d: int, q: float) -> RobustnessPoint:
    return RobustnessPoint(d, q, *(pt_min(c, d, q) for c in CURVES))


def crossing(curve: str, d: int, xtol: float = 1e-14) -> float:
    """Noise level where the PT-minimal eigenvalue of ``curve`` changes sign."""
    return brentq(lambda q: pt_min(curve, d, q), 0.0, 1.0, xtol=xtol)


def expected_crossing(curve: str, d: int) -> float:
    return {"mes_local": q_mes_local, "mes_global": q_mes_global,
            "gamma_local": q_nea_local, "gamma_global": q_nea_global}[curve](d)


# -- family verdicts used by ea_status and scans ---------------------------------

def _yes(method, cert=None, tol=STRUCTURAL_TOL):
    return Classification(Criterion.EA, Status.CERTIFIED_YES, cert, tol, method)


def classify_local(dims: DimPair, q1: float, q2: float, constructive: bool = False,
                   cfg: MatchingSearch | None = None) -> Classification:
    """Most definitive verdict for ``Phi_q1 (x) Phi_q2`` without a see-saw.

    Methods: ``exact`` (2x2, 3x2), ``eb_factor``, ``witness_no`` (Bell-type
    input with NPT output, checked before any search since it rules out a
    resolution), ``resolution`` (an explicit resolution), ``biseparable``
    (two-qubit biseparable Choi), ``unknown``.
    ``constructive`` skips the exact formula and reports constructive
    certificates only.
    """
    oriented, a, b, _ = _orient(dims, q1, q2)
    exact_dims = oriented.as_tuple() in ((2, 2), (3, 2))
    if exact_dims and not constructive:
        return exact_region(dims, q1, q2)
    lo_a, hi_a = eb_range(dims.dA)
    lo_b, hi_b = eb_range(dims.dB)
    if lo_a <= q1 <= hi_a or lo_b <= q2 <= hi_b:
        return _yes("eb_factor")
    witness = _witness_or_unknown(depolarizing_local(dims, q1, q2))
    if witness.no:
        return witness
    res = None
    if dims.dA == dims.dB and sufficient_region(dims.dA, q1, q2):
        try:
            res = local_resolution(dims.dA, q1, q2, cfg)
        except InfeasibleError:
            res = None
    elif dims.dA != dims.dB:
        res = _resolution_or_none(q1, q2, q1 * q2, dims, depolarizing_local(dims, q1, q2),
                                  cfg, "matching")
    if res is not None:
        return _yes("resolution", res.summary())
    if dims.as_tuple() == (2, 2) and biseparable_region(q1, q2):
        try:
            return _yes("biseparable", biseparable_decomposition(q1, q2).summary())
        except InfeasibleError:
            pass
    return witness


def classify_global(dims: DimPair, q: float, constructive: bool = False,
                    cfg: MatchingSearch | None = None) -> Classification:
    if dims.as_tuple() in ((2, 2), (3, 2), (2, 3)) and not constructive:
        return exact_region(dims, q=q)
    lo, hi = eb_range(dims.total)
    if lo <= q <= hi:
        return _yes("eb_factor")
    witness = _witness_or_unknown(depolarizing_global(dims, q))
    if witness.no:
        return witness
    res = None
    if dims.dA == dims.dB:
        if q <= q_ea_global(dims.dA) + STRUCTURAL_TOL:
            res = global_resolution(dims.dA, q)
    else:
        res = _resolution_or_none(q, q, q, dims, depolarizing_global(dims, q), cfg, "matching")
    if res is not None:
        return _yes("resolution", res.summary())
    return witness


def _witness_or_unknown(ch: Channel, tol: float = 1e-10) -> Classification:
    value, psi, w = _best_candidate(ch)
    if value < -tol:
        cert = {"kind": "input_state", "input": psi, "witness": w, "value": value}
        return Classification(Criterion.EA, Status.CERTIFIED_NO, cert, tol, "witness_no")
    return Classification(Criterion.EA, Status.UNKNOWN, tolerance=tol, method="unknown")


def family_ea_verdict(ch: Channel, tol: float = 1e-10):
    """Verdict for recognized depolarizing families, else ``None``.

    ``UNKNOWN`` outcomes are returned as ``None`` so the caller can continue
    with a general witness search.
    """
    if len(ch.dims_in) != 2 or ch.dims_in != ch.dims_out:
        return None
    dims = ch.in_pair
    local = local_depolarizing_parameters(ch, tol)
    if local is not None:
        verdict = classify_local(dims, *local)
    else:
        q = depolarizing_parameter(ch, tol)
        if q is None:
            return None
        verdict = classify_global(dims, q)
    return None if verdict.status is Status.UNKNOWN else verdict
