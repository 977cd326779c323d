"""Three-valued classification of maps: CP, TP, unital, EB, positive, PEA, EA.

Every verdict is a :class:`Classification`. ``CERTIFIED_NO`` always carries a
certificate that :func:`replay` can re-evaluate; ``UNKNOWN`` never does.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .channels import Channel, eb_range
from .linalg import (
    DimPair,
    default_tol,
    hermitian_eig,
    max_entangled,
    min_eig,
    partial_transpose,
    ptrace_multi,
    random_unit_vector,
)


class Status(str, Enum):
    CERTIFIED_YES = "CERTIFIED_YES"
    CERTIFIED_NO = "CERTIFIED_NO"
    UNKNOWN = "UNKNOWN"


class Criterion(str, Enum):
    CP = "CP"
    TP = "TP"
    UNITAL = "UNITAL"
    EB = "EB"
    POSITIVE_MAP = "POSITIVE_MAP"
    PEA = "PEA"
    EA = "EA"
    SEPARABLE = "SEPARABLE"


class NotAChannelError(ValueError):
    """EA status was requested for a map that is not CP and trace preserving."""


@dataclass(frozen=True, eq=False)
class Classification:
    criterion: Criterion
    status: Status
    certificate: dict | None = None
    tolerance: float = 1e-10
    method: str = ""
    seed: int | None = None

    def __post_init__(self):
        if self.status is Status.UNKNOWN and self.certificate is not None:
            raise ValueError("UNKNOWN verdicts never carry a certificate")

    @property
    def yes(self) -> bool:
        return self.status is Status.CERTIFIED_YES

    @property
    def no(self) -> bool:
        return self.status is Status.CERTIFIED_NO

    def to_dict(self) -> dict:
        out = {
            "criterion": self.criterion.value,
            "status": self.status.value,
            "tolerance": self.tolerance,
            "method": self.method,
        }
        if self.seed is not None:
            out["seed"] = self.seed
        if self.certificate is not None:
            out["certificate"] = _jsonable(self.certificate)
        return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        if np.iscomplexobj(obj):
            return np.stack([obj.real, obj.imag], axis=-1).tolist()
        return obj.tolist()
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if hasattr(obj, "summary"):
        return obj.summary()
    return obj


@dataclass(frozen=True)
class BlockPositiveWitnessSearch:
    """See-saw settings; ``restarts`` is scaled up with the total dimension."""

    restarts: int = 64
    max_iters: int = 200
    seed: int = 0
    violation_tolerance: float = 1e-9

    def __post_init__(self):
        if self.restarts < 1:
            raise ValueError("restarts must be >= 1")
        if not self.violation_tolerance > 0:
            raise ValueError("violation_tolerance must be positive")

    def effective_restarts(self, total_dim: int) -> int:
        return self.restarts * max(1, total_dim // 16)


def _tol(tol):
    return default_tol() if tol is None else tol


def _cut_dims(ch: Channel) -> DimPair:
    return DimPair(ch.d_out, ch.d_in) if min(ch.d_out, ch.d_in) >= 2 else None


# -- CP / TP / unital ---------------------------------------------------------

def is_cp(ch: Channel, tol=None) -> Classification:
    tol = _tol(tol)
    lam, vec = min_eig(ch.choi)
    if lam >= -tol:
        return Classification(Criterion.CP, Status.CERTIFIED_YES, tolerance=tol, method="choi_spectrum")
    cert = {"kind": "eigenvector", "vector": vec, "value": lam}
    return Classification(Criterion.CP, Status.CERTIFIED_NO, cert, tol, "choi_spectrum")


def _tp_deviation(ch: Channel) -> np.ndarray:
    marg = ptrace_multi(ch.choi, (ch.d_out, ch.d_in), [1])
    return marg - np.eye(ch.d_in) / ch.d_in


def _unital_deviation(ch: Channel) -> np.ndarray:
    return ch.apply(np.eye(ch.d_in) / ch.d_in) - np.eye(ch.d_out) / ch.d_out


def is_tp(ch: Channel, tol=None) -> Classification:
    tol = _tol(tol)
    dev = _tp_deviation(ch)
    size = float(np.max(np.abs(dev)))
    if size <= tol:
        return Classification(Criterion.TP, Status.CERTIFIED_YES, tolerance=tol, method="marginal")
    cert = {"kind": "tp_deviation", "matrix": dev, "value": size}
    return Classification(Criterion.TP, Status.CERTIFIED_NO, cert, tol, "marginal")


def is_unital(ch: Channel, tol=None) -> Classification:
    tol = _tol(tol)
    dev = _unital_deviation(ch)
    size = float(np.max(np.abs(dev)))
    if size <= tol:
        return Classification(Criterion.UNITAL, Status.CERTIFIED_YES, tolerance=tol, method="fixed_point")
    cert = {"kind": "unital_deviation", "matrix": dev, "value": size}
    return Classification(Criterion.UNITAL, Status.CERTIFIED_NO, cert, tol, "fixed_point")


# -- separability of states ------------------------------------------------------

def ppt_min_eigenvalue(state, dims: DimPair, cut="B") -> float:
    """Smallest eigenvalue of the partial transpose across the ``A|B`` cut."""
    return min_eig(partial_transpose(state, dims, cut))[0]


def _ppt_exact(dims: DimPair) -> bool:
    return dims.total <= 6


def is_separable_ppt(state, dims: DimPair, cut="B", tol=None) -> Classification:
    """PPT decides 2x2 and 2x3; elsewhere an NPT state is certified entangled only."""
    tol = _tol(tol)
    lam, vec = min_eig(partial_transpose(state, dims, cut))
    if lam < -tol:
        cert = {"kind": "pt_eigenvector", "vector": vec, "cut": cut, "dims": dims.as_tuple(), "value": lam}
        return Classification(Criterion.SEPARABLE, Status.CERTIFIED_NO, cert, tol, "ppt")
    if _ppt_exact(dims):
        return Classification(Criterion.SEPARABLE, Status.CERTIFIED_YES, tolerance=tol, method="ppt_exact")
    return Classification(Criterion.SEPARABLE, Status.UNKNOWN, tolerance=tol, method="ppt_inconclusive")


# -- diagonal-family recognition -------------------------------------------------

def transfer_diagonal(ch: Channel, tol: float = 1e-10):
    """Diagonal of the transfer matrix, or ``None`` if it is not diagonal."""
    if ch.dims_in != ch.dims_out:
        return None
    e = ch.transfer
    diag = np.diag(e)
    if np.max(np.abs(e - np.diag(diag))) > tol or np.max(np.abs(diag.imag)) > tol:
        return None
    return diag.real


def depolarizing_parameter(ch: Channel, tol: float = 1e-10):
    """``q`` when ``ch`` is ``Phi_q`` on a single system (or jointly on all factors)."""
    diag = transfer_diagonal(ch, tol)
    if diag is None or abs(diag[0] - 1) > tol:
        return None
    rest = diag[1:]
    if np.ptp(rest) > tol:
        return None
    return float(rest.mean())


def local_diagonal_factors(ch: Channel, tol: float = 1e-10):
    """``(u, v)`` when ``ch = Upsilon_A (x) Upsilon_B`` with diagonal transfer factors."""
    if len(ch.dims_in) != 2:
        return None
    diag = transfer_diagonal(ch, tol)
    if diag is None:
        return None
    da, db = ch.dims_in
    grid = diag.reshape(da * da, db * db)
    if abs(grid[0, 0] - 1) > tol:
        return None
    u, v = grid[:, 0], grid[0, :]
    if np.max(np.abs(np.outer(u, v) - grid)) > tol:
        return None
    return u, v


def local_depolarizing_parameters(ch: Channel, tol: float = 1e-10):
    """``(q1, q2)`` when ``ch = Phi_q1 (x) Phi_q2``."""
    factors = local_diagonal_factors(ch, tol)
    if factors is None:
        return None
    u, v = factors
    if np.ptp(u[1:]) > tol or np.ptp(v[1:]) > tol:
        return None
    return float(u[1:].mean()), float(v[1:].mean())


def lambda_st_parameters(ch: Channel, tol: float = 1e-10):
    """``(s, t)`` when ``ch`` has the diagonal pattern of ``Lambda_{s,t}``."""
    if len(ch.dims_in) != 2:
        return None
    diag = transfer_diagonal(ch, tol)
    if diag is None:
        return None
    da, db = ch.dims_in
    grid = diag.reshape(da * da, db * db)
    one = np.concatenate([grid[0, 1:], grid[1:, 0]])
    both = grid[1:, 1:].reshape(-1)
    if abs(grid[0, 0] - 1) > tol or np.ptp(one) > tol or np.ptp(both) > tol:
        return None
    return float(one.mean()), float(both.mean())


def pauli_diagonal_triple(ch: Channel, tol: float = 1e-10):
    """``(l1, l2, l3)`` for a qubit map with transfer ``diag(1, l1, l2, l3)``."""
    if ch.dims_in != (2,):
        return None
    diag = transfer_diagonal(ch, tol)
    if diag is None or abs(diag[0] - 1) > tol:
        return None
    return tuple(float(x) for x in diag[1:])


# -- entanglement breaking ----------------------------------------------------

def eb_status(ch: Channel, tol=None) -> Classification:
    tol = _tol(tol)
    cp = is_cp(ch, tol)
    if cp.no:
        return Classification(Criterion.EB, Status.CERTIFIED_NO, cp.certificate, tol, "not_cp")
    cut = _cut_dims(ch)
    lam, vec = min_eig(partial_transpose(ch.choi, cut, "B"))
    npt_cert = {"kind": "pt_eigenvector", "vector": vec, "cut": "B", "dims": cut.as_tuple(), "value": lam}
    q = depolarizing_parameter(ch)
    if q is not None:
        lo, hi = eb_range(ch.d_in)
        if lo - tol <= q <= hi + tol:
            return Classification(Criterion.EB, Status.CERTIFIED_YES, tolerance=tol, method="depolarizing_range")
        return Classification(Criterion.EB, Status.CERTIFIED_NO, npt_cert, tol, "depolarizing_range")
    local = local_depolarizing_parameters(ch) if len(ch.dims_in) == 2 else None
    if local is not None and lam >= -tol:
        # a product is EB iff every factor is
        ranges = [eb_range(d) for d in ch.dims_in]
        if all(lo - tol <= q <= hi + tol for q, (lo, hi) in zip(local, ranges)):
            return Classification(Criterion.EB, Status.CERTIFIED_YES, tolerance=tol, method="depolarizing_range")
    if lam < -tol:
        return Classification(Criterion.EB, Status.CERTIFIED_NO, npt_cert, tol, "choi_npt")
    if _ppt_exact(cut):
        return Classification(Criterion.EB, Status.CERTIFIED_YES, tolerance=tol, method="choi_ppt_exact")
    return Classification(Criterion.EB, Status.UNKNOWN, tolerance=tol, method="choi_ppt_inconclusive")


# -- block positivity ----------------------------------------------------------

def _unit_rows(rng, n, d):
    v = rng.normal(size=(n, d)) + 1j * rng.normal(size=(n, d))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _herm_min_vectors(stack):
    stack = 0.5 * (stack + stack.conj().transpose(0, 2, 1))
    w, v = np.linalg.eigh(stack)
    return w[:, 0], v[:, :, 0]


def see_saw_product_minimum(m, dims: DimPair, restarts: int, max_iters: int, seed=0,
                            conv: float = 1e-14):
    """Minimize ``<x (x) y| m |x (x) y>`` by alternating minimal eigenvectors.

    All restarts run as one batch; each restart's start vector comes from its
    own child seed so results depend only on ``(seed, restarts)``.
    """
    dx, dy = dims.dA, dims.dB
    m4 = np.asarray(m, dtype=complex).reshape(dx, dy, dx, dy)
    children = np.random.SeedSequence(seed).spawn(restarts)
    y = np.array([_unit_rows(np.random.default_rng(c), 1, dy)[0] for c in children])
    prev = np.full(restarts, np.inf)
    for _ in range(max_iters):
        mx = np.einsum("aibj,ri,rj->rab", m4, y.conj(), y)
        _, x = _herm_min_vectors(mx)
        my = np.einsum("aibj,ra,rb->rij", m4, x.conj(), x)
        val, y = _herm_min_vectors(my)
        if np.max(np.abs(prev - val)) <= conv:
            break
        prev = val
    best = int(np.argmin(val))
    return float(val[best]), x[best], y[best]


def _product_value(m, dims: DimPair, x, y) -> float:
    xy = np.kron(x, y)
    return float(np.real(xy.conj() @ np.asarray(m) @ xy))


def block_positivity(m, dims: DimPair, cfg: BlockPositiveWitnessSearch | None = None,
                     tol=None) -> Classification:
    """Block-positivity of ``m`` across ``A|B``: PSD certifies yes, see-saw finds no."""
    tol = _tol(tol)
    cfg = cfg or BlockPositiveWitnessSearch()
    if min_eig(m)[0] >= -tol:
        return Classification(Criterion.POSITIVE_MAP, Status.CERTIFIED_YES, tolerance=tol, method="psd")
    value, x, y = see_saw_product_minimum(
        m, dims, cfg.effective_restarts(dims.total), cfg.max_iters, cfg.seed
    )
    if value < -cfg.violation_tolerance:
        cert = {"kind": "product_vector", "x": x, "y": y, "dims": dims.as_tuple(), "value": value}
        return Classification(Criterion.POSITIVE_MAP, Status.CERTIFIED_NO, cert,
                              cfg.violation_tolerance, "see_saw", cfg.seed)
    return Classification(Criterion.POSITIVE_MAP, Status.UNKNOWN, tolerance=cfg.violation_tolerance,
                          method="see_saw", seed=cfg.seed)


def positivity_status(ch: Channel, cfg: BlockPositiveWitnessSearch | None = None,
                      tol=None) -> Classification:
    """Positivity of a map via block-positivity of its Choi matrix across ``out|in``."""
    tol = _tol(tol)
    cls = block_positivity(ch.choi, _cut_dims(ch), cfg, tol)
    if not cls.no:
        st = lambda_st_parameters(ch)
        if st is not None:
            s, t = st
            d = max(ch.dims_in)
            if -tol <= s <= t + tol and t <= 1 / (d - 1) + (1 - 1 / (d - 1)) * s + tol:
                return Classification(Criterion.POSITIVE_MAP, Status.CERTIFIED_YES,
                                      tolerance=tol, method="lambda_st_inequality")
        triple = pauli_diagonal_triple(ch)
        if triple is not None and all(abs(l) <= 1 + tol for l in triple):
            return Classification(Criterion.POSITIVE_MAP, Status.CERTIFIED_YES,
                                  tolerance=tol, method="bloch_axes")
    return cls


# -- PEA witnesses ---------------------------------------------------------------

@dataclass
class _SecondFactorMap:
    """Positive map ``L^dagger: T(H_A) -> T(H_B)`` applied on the second factor.

    ``kind`` is ``"transpose"`` (``X -> W X^T W^dagger``) or ``"reduction"``
    (``X -> tr(X) I - W X W^dagger`` with ``||W|| <= 1``).
    """

    parts: list = field(default_factory=list)  # (weight, kind, W)

    def forward(self, z, da):
        """``(Id (x) L^dagger)[z]`` for ``z`` on ``A (x) A``."""
        out = 0
        for w, kind, W in self.parts:
            db = W.shape[0]
            big = np.kron(np.eye(da), W)
            if kind == "transpose":
                zt = partial_transpose(z, DimPair(da, da), "B")
                out = out + w * (big @ zt @ big.conj().T)
            else:
                marg = ptrace_multi(z, (da, da), [0])
                out = out + w * (np.kron(marg, np.eye(db)) - big @ z @ big.conj().T)
        return out

    def dual(self, n, da):
        """``(Id (x) L)[n]`` for ``n`` on ``A (x) B``."""
        out = 0
        for w, kind, W in self.parts:
            db = W.shape[0]
            big = np.kron(np.eye(da), W)
            if kind == "transpose":
                inner = big.conj().T @ n @ big
                out = out + w * partial_transpose(inner, DimPair(da, da), "B")
            else:
                marg = ptrace_multi(n, (da, db), [0])
                out = out + w * (np.kron(marg, np.eye(da)) - big.conj().T @ n @ big)
        return out


def _random_contraction(rng, db, da):
    g = rng.normal(size=(db, da)) + 1j * rng.normal(size=(db, da))
    return g / np.linalg.norm(g, 2)


def _witness_maps(da, db, n_samples, rng):
    eye = np.eye(db, da)
    yield _SecondFactorMap([(1.0, "transpose", eye)])
    yield _SecondFactorMap([(1.0, "reduction", eye)])
    for _ in range(max(0, n_samples - 2)):
        roll = rng.random()
        if roll < 0.4:
            parts = [(1.0, "transpose", _random_contraction(rng, db, da))]
        elif roll < 0.6:
            parts = [(1.0, "reduction", _random_contraction(rng, db, da))]
        else:
            k = rng.integers(2, 4)
            w = rng.dirichlet(np.ones(k))
            parts = [(float(wi), str(rng.choice(["transpose", "reduction"])),
                      _random_contraction(rng, db, da)) for wi in w]
        yield _SecondFactorMap(parts)


def pea_value(ch: Channel, xi, rho) -> float:
    """``tr[(xi (x) rho) Omega]`` with ``xi`` on the output and ``rho`` on the input."""
    return float(np.real(np.trace(np.kron(xi, rho) @ ch.choi)))


def pea_witness_search(ch: Channel, n_samples: int = 24, seed=0, iters: int = 25,
                       tol=None) -> Classification:
    """Search block-positive ``xi`` and states ``rho`` with a negative pairing.

    ``xi = (Id (x) L^dagger)[|phi><phi|]`` for positive ``L``; for fixed ``xi``
    the best ``rho`` is a minimal eigenvector and for fixed ``rho`` the best
    ``phi`` is too, so each sample alternates between the two.
    """
    tol = _tol(tol)
    da, db = ch.dims_out
    d_out, d_in = ch.d_out, ch.d_in
    c4 = ch.choi.reshape(d_out, d_in, d_out, d_in)
    rng = np.random.default_rng(seed)
    best = (np.inf, None, None)
    for n, lam in enumerate(_witness_maps(da, db, n_samples, rng)):
        phi = max_entangled(da) if n < 2 else random_unit_vector(da * da, rng)
        for _ in range(iters):
            xi = lam.forward(np.outer(phi, phi.conj()), da)
            m = np.einsum("xy,yixj->ij", xi, c4)
            value, r = min_eig(m)
            rho = np.outer(r, r.conj())
            nmat = np.einsum("ab,xbya->xy", rho, c4)
            _, phi = min_eig(lam.dual(nmat, da))
        if value < best[0]:
            best = (value, xi, rho)
        if best[0] < -tol:
            break
    value, xi, rho = best
    if value < -tol:
        cert = {"kind": "pea_witness", "xi": xi, "rho": rho, "value": pea_value(ch, xi, rho)}
        return Classification(Criterion.PEA, Status.CERTIFIED_NO, cert, tol, "block_positive_witness", seed)
    return Classification(Criterion.PEA, Status.UNKNOWN, tolerance=tol, method="block_positive_witness", seed=seed)


# -- entanglement annihilation -----------------------------------------------------

def output_pt_value(ch: Channel, psi, witness=None) -> tuple[float, np.ndarray]:
    """Smallest PT eigenvalue of ``ch[|psi><psi|]`` (or ``<w|.|w>`` for a given ``w``)."""
    out = ch.apply(np.outer(psi, np.conj(psi)))
    pt = partial_transpose(out, ch.out_pair, "B")
    if witness is not None:
        return float(np.real(np.conj(witness) @ pt @ witness)), witness
    return min_eig(pt)


def bell_candidates(dims: DimPair):
    """Maximally entangled input of rank ``min(dA, dB)`` plus every two-level Bell pair."""
    da, db = dims.dA, dims.dB
    m = min(da, db)
    cands = []
    psi = np.zeros(da * db, dtype=complex)
    for i in range(m):
        psi[i * db + i] = 1
    cands.append(psi / np.sqrt(m))
    for i in range(m):
        for j in range(i + 1, m):
            v = np.zeros(da * db, dtype=complex)
            v[i * db + i] = v[j * db + j] = 1 / np.sqrt(2)
            cands.append(v)
    return cands


def _ea_no(ch, psi, wvec, value, tol, method, seed=None):
    cert = {"kind": "input_state", "input": psi, "witness": wvec, "value": value}
    return Classification(Criterion.EA, Status.CERTIFIED_NO, cert, tol, method, seed)


def candidate_input_witness(ch: Channel, tol=None):
    """Most negative output-PT eigenvalue over the Bell-type candidate inputs."""
    tol = _tol(tol)
    best = None
    for psi in bell_candidates(ch.in_pair):
        value, w = output_pt_value(ch, psi)
        if best is None or value < best[0]:
            best = (value, psi, w)
    if best[0] < -tol:
        return _ea_no(ch, best[1], best[2], best[0], tol, "candidate_input")
    return None


def search_input_witness(ch: Channel, cfg: BlockPositiveWitnessSearch | None = None):
    """See-saw over pure inputs minimizing the output's PT spectrum.

    Equivalent to block-positivity of the Choi matrix of ``(Id (x) T) o Phi``
    across ``AB|A'B'``; a product vector ``x (x) y`` maps to input ``conj(y)``.
    """
    cfg = cfg or BlockPositiveWitnessSearch()
    cut = DimPair(ch.d_out, ch.d_in)
    pt_choi = ptrace_free_partial_transpose(ch)
    value, x, y = see_saw_product_minimum(
        pt_choi, cut, cfg.effective_restarts(cut.total), cfg.max_iters, cfg.seed
    )
    if value < -cfg.violation_tolerance:
        psi = y.conj()
        true_value, _ = output_pt_value(ch, psi, x)
        return _ea_no(ch, psi, x, true_value, cfg.violation_tolerance, "see_saw", cfg.seed)
    return None


def ptrace_free_partial_transpose(ch: Channel) -> np.ndarray:
    """Choi matrix of ``(Id_A (x) T_B) o Phi``: transpose output factor ``B``."""
    da, db = ch.dims_out
    d_in = ch.d_in
    c = ch.choi.reshape(da, db, d_in, da, db, d_in).transpose(0, 4, 2, 3, 1, 5)
    n = ch.d_out * d_in
    return c.reshape(n, n)


def ea_status(ch: Channel, cfg: BlockPositiveWitnessSearch | None = None, tol=None,
              search: bool = True) -> Classification:
    """EA verdict for a bipartite channel.

    Closed-form regions and explicit resolutions certify ``yes``; entangled
    outputs (Bell-type candidates first, then a see-saw over pure inputs)
    certify ``no``. ``search=False`` skips the see-saw.
    """
    from . import depolarizing_ea as dep

    tol = _tol(tol)
    cfg = cfg or BlockPositiveWitnessSearch()
    if len(ch.dims_out) != 2 or len(ch.dims_in) != 2:
        raise ValueError("EA status needs bipartite input and output")
    cp, tp = is_cp(ch, tol), is_tp(ch, tol)
    if not (cp.yes and tp.yes):
        raise NotAChannelError("EA status requires a CP trace-preserving map")

    verdict = dep.family_ea_verdict(ch, tol)
    if verdict is not None:
        return verdict

    witness = candidate_input_witness(ch, tol)
    if witness is None and search:
        witness = search_input_witness(ch, cfg)
    if witness is not None:
        return witness
    return Classification(Criterion.EA, Status.UNKNOWN, tolerance=tol,
                          method="no_witness_found", seed=cfg.seed if search else None)


# -- certificate replay --------------------------------------------------------

def replay(cls: Classification, target) -> float:
    """Re-evaluate a ``CERTIFIED_NO`` certificate against a channel or matrix.

    Returns the recomputed violation: a negative value for spectral kinds, the
    deviation size for TP / unital kinds.
    """
    cert = cls.certificate
    if cert is None:
        raise ValueError("verdict carries no certificate")
    kind = cert["kind"]
    choi = target.choi if isinstance(target, Channel) else np.asarray(target)
    if kind == "eigenvector":
        v = cert["vector"]
        return float(np.real(v.conj() @ choi @ v))
    if kind == "pt_eigenvector":
        v = cert["vector"]
        pt = partial_transpose(choi, DimPair(*cert["dims"]), cert["cut"])
        return float(np.real(v.conj() @ pt @ v))
    if kind == "product_vector":
        return _product_value(choi, DimPair(*cert["dims"]), cert["x"], cert["y"])
    if kind == "pea_witness":
        return pea_value(target, cert["xi"], cert["rho"])
    if kind == "input_state":
        return output_pt_value(target, cert["input"], cert["witness"])[0]
    if kind == "tp_deviation":
        return float(np.max(np.abs(_tp_deviation(target))))
    if kind == "unital_deviation":
        return float(np.max(np.abs(_unital_deviation(target))))
    raise ValueError(f"unknown certificate kind {kind!r}")


def replays(cls: Classification, target) -> bool:
    """True if re-evaluation reproduces at least half the recorded violation."""
    value = replay(cls, target)
    recorded = cls.certificate["value"]
    if cls.certificate["kind"] in ("tp_deviation", "unital_deviation"):
        return value >= 0.5 * recorded
    return recorded < 0 and value <= 0.5 * recorded


__all__ = [
    "BlockPositiveWitnessSearch",
    "Classification",
    "Criterion",
    "NotAChannelError",
    "Status",
    "block_positivity",
    "eb_status",
    "ea_status",
    "hermitian_eig",
    "is_cp",
    "is_separable_ppt",
    "is_tp",
    "is_unital",
    "pea_witness_search",
    "positivity_status",
    "ppt_min_eigenvalue",
    "replay",
    "replays",
]
