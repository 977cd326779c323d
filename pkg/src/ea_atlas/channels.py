"""Linear maps between (possibly bipartite) operator spaces.

A :class:`Channel` holds any of three representations and converts lazily:

* Kraus operators ``A_k`` of shape ``(d_out, d_in)``;
* the Choi matrix ``(Phi (x) Id)[|Psi+><Psi+|]`` on ``out (x) in`` with unit
  trace for trace-preserving maps;
* the transfer matrix ``E[j, k] = tr(o_j Phi[i_k])`` in the product Gell-Mann
  bases of the output and input factors.

With this transfer convention composition is ``E[f o g] = E[f] @ E[g]``.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass

import numpy as np

from .linalg import (
    STRUCTURAL_TOL,
    DimPair,
    as_matrix,
    hermitian_eig,
    is_hermitian,
    max_entangled,
    product_basis,
)

KRAUS_CUTOFF = 1e-10


class NotCompletelyPositiveError(ValueError):
    """Kraus form requested for a map whose Choi matrix is not PSD."""


class ChannelFormatError(ValueError):
    """A serialized channel failed validation; ``failures`` lists each problem."""

    def __init__(self, failures):
        self.failures = list(failures)
        super().__init__("; ".join(self.failures))


def _dims(dims) -> tuple[int, ...]:
    if isinstance(dims, DimPair):
        return dims.as_tuple()
    if np.isscalar(dims):
        return (int(dims),)
    out = tuple(int(d) for d in dims)
    if not out or any(d < 1 for d in out):
        raise ValueError(f"invalid subsystem dimensions {dims!r}")
    return out


def _frozen(arr) -> np.ndarray:
    arr = np.array(arr, dtype=complex)
    arr.setflags(write=False)
    return arr


def choi_from_kraus(kraus, d_in: int) -> np.ndarray:
    vecs = np.array([np.asarray(k, dtype=complex).reshape(-1) for k in kraus])
    return vecs.T @ vecs.conj() / d_in


def kraus_from_choi(choi, d_in: int, d_out: int, cutoff: float = KRAUS_CUTOFF):
    w, v = hermitian_eig(choi)
    if w[0] < -cutoff:
        raise NotCompletelyPositiveError(
            f"Choi matrix has negative eigenvalue {w[0]:.3e}; no Kraus form"
        )
    keep = w > cutoff
    return [
        np.sqrt(d_in * lam) * vec.reshape(d_out, d_in)
        for lam, vec in zip(w[keep], v[:, keep].T)
    ]


def transfer_from_choi(choi, dims_in, dims_out) -> np.ndarray:
    o = product_basis(dims_out).elements
    i = product_basis(dims_in).elements
    d_in, d_out = int(np.prod(dims_in)), int(np.prod(dims_out))
    c4 = np.asarray(choi).reshape(d_out, d_in, d_out, d_in)
    # E[J, K] = d_in * sum Omega[x,a,y,b] o_J[y,x] i_K[a,b]
    tmp = np.tensordot(o, c4, axes=([1, 2], [2, 0]))  # J, a, b
    return d_in * np.tensordot(tmp, i, axes=([1, 2], [1, 2]))


def choi_from_transfer(transfer, dims_in, dims_out) -> np.ndarray:
    o = product_basis(dims_out).elements
    i = product_basis(dims_in).elements
    d_in, d_out = int(np.prod(dims_in)), int(np.prod(dims_out))
    # Omega = (1/d_in) sum E[J,K] o_J (x) i_K^T
    tmp = np.tensordot(np.asarray(transfer), i, axes=([1], [0]))  # J, a, b
    c4 = np.tensordot(o, tmp, axes=([0], [0]))  # x, y, a, b
    c4 = c4.transpose(0, 3, 1, 2)  # x, b, y, a  == (o x i^T)[(x,b),(y,a)]
    return c4.reshape(d_out * d_in, d_out * d_in) / d_in


class Channel:
    """A linear map with lazily converted Kraus / Choi / transfer forms.

    Instances are immutable; conversions are memoized under a lock so
    concurrent readers see a single consistent cache.
    """

    def __init__(self, dims_in, dims_out=None, *, kraus=None, choi=None,
                 transfer=None, label: str | None = None):
        self.dims_in = _dims(dims_in)
        self.dims_out = self.dims_in if dims_out is None else _dims(dims_out)
        self.d_in = int(np.prod(self.dims_in))
        self.d_out = int(np.prod(self.dims_out))
        self.label = label
        self._lock = threading.RLock()
        self._cache: dict[str, object] = {}
        if kraus is None and choi is None and transfer is None:
            raise ValueError("a channel needs at least one representation")
        if kraus is not None:
            ks = [np.asarray(k, dtype=complex) for k in kraus]
            for k in ks:
                if k.shape != (self.d_out, self.d_in):
                    raise ValueError(
                        f"Kraus operator shape {k.shape} != {(self.d_out, self.d_in)}"
                    )
            self._cache["kraus"] = tuple(_frozen(k) for k in ks)
        if choi is not None:
            c = as_matrix(choi)
            n = self.d_out * self.d_in
            if c.shape != (n, n):
                raise ValueError(f"Choi shape {c.shape} != {(n, n)}")
            self._cache["choi"] = _frozen(c)
        if transfer is not None:
            t = np.asarray(transfer, dtype=complex)
            if t.shape != (self.d_out**2, self.d_in**2):
                raise ValueError(
                    f"transfer shape {t.shape} != {(self.d_out**2, self.d_in**2)}"
                )
            self._cache["transfer"] = _frozen(t)

    def __repr__(self):
        name = self.label or "Channel"
        return f"<{name} {self.dims_in}->{self.dims_out}>"

    def _memo(self, key, build):
        with self._lock:
            if key not in self._cache:
                self._cache[key] = build()
            return self._cache[key]

    @property
    def representations(self) -> tuple[str, ...]:
        return tuple(self._cache)

    @property
    def choi(self) -> np.ndarray:
        def build():
            if "kraus" in self._cache:
                return _frozen(choi_from_kraus(self._cache["kraus"], self.d_in))
            return _frozen(
                choi_from_transfer(self._cache["transfer"], self.dims_in, self.dims_out)
            )

        return self._memo("choi", build)

    @property
    def kraus(self) -> tuple[np.ndarray, ...]:
        return self._memo(
            "kraus",
            lambda: tuple(
                _frozen(k) for k in kraus_from_choi(self.choi, self.d_in, self.d_out)
            ),
        )

    @property
    def transfer(self) -> np.ndarray:
        return self._memo(
            "transfer",
            lambda: _frozen(transfer_from_choi(self.choi, self.dims_in, self.dims_out)),
        )

    @property
    def out_pair(self) -> DimPair:
        if len(self.dims_out) != 2:
            raise ValueError(f"output {self.dims_out} is not bipartite")
        return DimPair(*self.dims_out)

    @property
    def in_pair(self) -> DimPair:
        if len(self.dims_in) != 2:
            raise ValueError(f"input {self.dims_in} is not bipartite")
        return DimPair(*self.dims_in)

    def apply(self, x) -> np.ndarray:
        """``Phi[X] = d_in tr_in[Omega (I (x) X^T)]``."""
        x = as_matrix(x)
        if x.shape != (self.d_in, self.d_in):
            raise ValueError(f"input shape {x.shape} != {(self.d_in, self.d_in)}")
        c4 = self.choi.reshape(self.d_out, self.d_in, self.d_out, self.d_in)
        return self.d_in * np.einsum("xayb,ab->xy", c4, x)

    def apply_kraus(self, x) -> np.ndarray:
        x = as_matrix(x)
        return sum(k @ x @ k.conj().T for k in self.kraus)

    def __matmul__(self, other: "Channel") -> "Channel":
        return compose(self, other)


def compose(outer: Channel, inner: Channel) -> Channel:
    """``outer o inner`` computed as a link product of Choi matrices."""
    if outer.dims_in != inner.dims_out and outer.d_in != inner.d_out:
        raise ValueError(f"cannot compose {outer!r} after {inner!r}")
    do, dm, di = outer.d_out, outer.d_in, inner.d_in
    f4 = outer.choi.reshape(do, dm, do, dm)
    g4 = inner.choi.reshape(dm, di, dm, di)
    c = dm * np.einsum("omnp,mjpk->ojnk", f4, g4, optimize=True)
    return Channel(inner.dims_in, outer.dims_out, choi=c.reshape(do * di, do * di))


def tensor(ch_a: Channel, ch_b: Channel) -> Channel:
    """``Phi_A (x) Phi_B`` with ``A`` as the slow factor on both sides."""
    oa, ia, ob, ib = ch_a.d_out, ch_a.d_in, ch_b.d_out, ch_b.d_in
    a6 = ch_a.choi.reshape(oa, ia, oa, ia)
    b6 = ch_b.choi.reshape(ob, ib, ob, ib)
    big = np.multiply.outer(a6, b6)  # oa ia oa ia ob ib ob ib
    big = big.transpose(0, 4, 1, 5, 2, 6, 3, 7)
    n = oa * ob * ia * ib
    return Channel(
        ch_a.dims_in + ch_b.dims_in,
        ch_a.dims_out + ch_b.dims_out,
        choi=big.reshape(n, n),
    )


def mix(weights, channels) -> Channel:
    """Convex combination of maps with identical dimensions."""
    weights = np.asarray(weights, dtype=float)
    channels = list(channels)
    if len(weights) != len(channels) or not channels:
        raise ValueError("weights and channels must be non-empty and equal length")
    if np.any(weights < 0):
        raise ValueError("mixture weights must be nonnegative")
    if abs(weights.sum() - 1.0) > STRUCTURAL_TOL:
        raise ValueError(f"mixture weights sum to {weights.sum()!r}, not 1")
    first = channels[0]
    for ch in channels[1:]:
        if ch.dims_in != first.dims_in or ch.dims_out != first.dims_out:
            raise ValueError("all mixed channels must share dimensions")
    c = sum(w * ch.choi for w, ch in zip(weights, channels))
    return Channel(first.dims_in, first.dims_out, choi=c)


def identity_channel(dims) -> Channel:
    dims = _dims(dims)
    d = int(np.prod(dims))
    psi = max_entangled(d)
    return Channel(dims, dims, choi=np.outer(psi, psi.conj()), label="Id")


def trace_map(d) -> Channel:
    """``Tr[X] = tr(X) I / d``."""
    dims = _dims(d)
    n = int(np.prod(dims))
    return Channel(dims, dims, choi=np.eye(n * n) / n**2, label="Tr")


def transpose_map(d: int) -> Channel:
    swap = np.eye(d * d).reshape(d, d, d, d).transpose(0, 1, 3, 2).reshape(d * d, d * d)
    return Channel((d,), (d,), choi=swap / d, label="T")


def reduction_map(d: int) -> Channel:
    """``R[X] = tr(X) I - X`` (positive, not CP)."""
    psi = max_entangled(d)
    c = np.eye(d * d) / d - np.outer(psi, psi.conj())
    return Channel((d,), (d,), choi=c, label="R")


def cp_range(d: int) -> tuple[float, float]:
    return (-1.0 / (d * d - 1), 1.0)


def eb_range(d: int) -> tuple[float, float]:
    return (-1.0 / (d * d - 1), 1.0 / (d + 1))


def _depolarizing_choi(n: int, q: float) -> np.ndarray:
    psi = max_entangled(n)
    return q * np.outer(psi, psi.conj()) + (1 - q) * np.eye(n * n) / n**2


def _check_q(n: int, q: float):
    lo, hi = cp_range(n)
    if not (lo - STRUCTURAL_TOL <= q <= hi + STRUCTURAL_TOL):
        raise ValueError(f"q={q!r} outside the CP range [{lo:.6g}, 1] for d={n}")


def depolarizing(d: int, q: float) -> Channel:
    """``Phi_q = q Id + (1 - q) Tr`` on a single ``d``-level system."""
    _check_q(d, q)
    transfer = np.diag([1.0] + [q] * (d * d - 1))
    return Channel((d,), (d,), choi=_depolarizing_choi(d, q), transfer=transfer,
                   label=f"Phi_{q:.6g}")


def depolarizing_global(dims: DimPair, q: float) -> Channel:
    """``Phi_q`` acting jointly on ``A (x) B``."""
    n = dims.total
    _check_q(n, q)
    transfer = np.diag([1.0] + [q] * (n * n - 1))
    return Channel(dims.as_tuple(), dims.as_tuple(), choi=_depolarizing_choi(n, q),
                   transfer=transfer, label=f"Phi_{q:.6g}^AB")


def depolarizing_local(dims: DimPair, q1: float, q2: float) -> Channel:
    return tensor(depolarizing(dims.dA, q1), depolarizing(dims.dB, q2))


@dataclass(frozen=True)
class LambdaST:
    """Diagonal map with 1 on the identity sector, ``s`` on one-sided sectors
    and ``t`` where both Gell-Mann indices are nonzero."""

    dims: DimPair
    s: float
    t: float

    @classmethod
    def square(cls, d: int, s: float, t: float) -> "LambdaST":
        return cls(DimPair(d, d), s, t)

    @property
    def d(self) -> int:
        return max(self.dims.dA, self.dims.dB)

    def positivity_bound(self) -> float:
        d = self.d
        return 1.0 / (d - 1) + (1.0 - 1.0 / (d - 1)) * self.s

    def certified_positive(self, tol: float = STRUCTURAL_TOL) -> bool:
        """Sufficient positivity condition ``0 <= s <= t <= 1/(d-1) + (1-1/(d-1)) s``."""
        return (
            -tol <= self.s
            and self.s <= self.t + tol
            and self.t <= self.positivity_bound() + tol
        )

    def transfer_diagonal(self) -> np.ndarray:
        na, nb = self.dims.dA**2, self.dims.dB**2
        diag = np.full((na, nb), self.t)
        diag[0, :] = self.s
        diag[:, 0] = self.s
        diag[0, 0] = 1.0
        return diag.reshape(-1)


def lambda_st(params: LambdaST) -> Channel:
    """Build ``Lambda_{s,t}`` as ``Tr(x)Tr + s (Tr(x)P + P(x)Tr) + t P(x)P``, ``P = Id - Tr``."""
    da, db = params.dims.dA, params.dims.dB
    ida, idb = identity_channel(da).choi, identity_channel(db).choi
    tra, trb = trace_map(da).choi, trace_map(db).choi
    pa, pb = ida - tra, idb - trb
    ta, tb = Channel(da, choi=tra), Channel(db, choi=trb)
    pA, pB = Channel(da, choi=pa), Channel(db, choi=pb)
    c = (
        tensor(ta, tb).choi
        + params.s * (tensor(ta, pB).choi + tensor(pA, tb).choi)
        + params.t * tensor(pA, pB).choi
    )
    return Channel(params.dims.as_tuple(), params.dims.as_tuple(), choi=c,
                   transfer=np.diag(params.transfer_diagonal()),
                   label=f"Lambda_{params.s:.4g},{params.t:.4g}")


@dataclass(frozen=True, eq=False)
class EbOperation:
    """Rank-one operation ``X -> A X A^dagger`` on one subsystem."""

    a_op: np.ndarray
    target: str = "A"

    def __post_init__(self):
        a = np.asarray(self.a_op, dtype=complex)
        sv = np.linalg.svd(a, compute_uv=False)
        if len(sv) > 1 and sv[1] > STRUCTURAL_TOL:
            raise ValueError(f"EB operation must be rank one (second singular value {sv[1]:.3e})")
        object.__setattr__(self, "a_op", a)
        if self.target not in ("A", "B"):
            raise ValueError("target must be 'A' or 'B'")

    @classmethod
    def from_vectors(cls, phi, psi, target="A") -> "EbOperation":
        return cls(np.outer(np.asarray(phi, complex), np.asarray(psi, complex).conj()), target)


def eb_operation_channel(op: EbOperation, dims: DimPair | None = None) -> Channel:
    """``(O_EB (x) Id)`` or ``(Id (x) O_EB)``; a single-system map when ``dims`` is None."""
    a = op.a_op
    if dims is None:
        return Channel(a.shape[1], a.shape[0], kraus=[a], label="O_EB")
    if op.target == "A":
        k = np.kron(a, np.eye(dims.dB))
        return Channel(dims.as_tuple(), (a.shape[0], dims.dB), kraus=[k], label="O_EB(x)Id")
    k = np.kron(np.eye(dims.dA), a)
    return Channel(dims.as_tuple(), (dims.dA, a.shape[0]), kraus=[k], label="Id(x)O_EB")


def sum_channels(channels) -> Channel:
    channels = list(channels)
    first = channels[0]
    return Channel(first.dims_in, first.dims_out, choi=sum(c.choi for c in channels))


# -- serialization ---------------------------------------------------------

def _encode(arr) -> list:
    arr = np.asarray(arr, dtype=complex)
    return np.stack([arr.real, arr.imag], axis=-1).tolist()


def _decode(data, where: str, failures: list[str]):
    try:
        arr = np.asarray(data, dtype=float)
    except (TypeError, ValueError):
        failures.append(f"{where}: not a numeric nested array")
        return None
    if arr.ndim < 1 or arr.shape[-1] != 2:
        failures.append(f"{where}: entries must be [re, im] pairs")
        return None
    return arr[..., 0] + 1j * arr[..., 1]


def channel_to_dict(ch: Channel, repr: str = "choi") -> dict:
    data = {"kraus": lambda: [_encode(k) for k in ch.kraus],
            "choi": lambda: _encode(ch.choi),
            "transfer": lambda: _encode(ch.transfer)}[repr]()
    return {"dims_in": list(ch.dims_in), "dims_out": list(ch.dims_out),
            "repr": repr, "data": data}


def channel_from_dict(obj) -> Channel:
    """Validate and load a channel record, collecting every failed check."""
    failures: list[str] = []
    if not isinstance(obj, dict):
        raise ChannelFormatError(["root: expected a JSON object"])
    for key in ("dims_in", "dims_out", "repr", "data"):
        if key not in obj:
            failures.append(f"{key}: missing")
    if failures:
        raise ChannelFormatError(failures)
    dims = {}
    for key in ("dims_in", "dims_out"):
        val = obj[key]
        if (not isinstance(val, list) or not 1 <= len(val) <= 2
                or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 1 for v in val)):
            failures.append(f"{key}: expected a list of one or two positive integers")
        else:
            dims[key] = tuple(val)
    rep = obj["repr"]
    if rep not in ("kraus", "choi", "transfer"):
        failures.append(f"repr: must be kraus|choi|transfer, got {rep!r}")
    if failures:
        raise ChannelFormatError(failures)
    d_in, d_out = int(np.prod(dims["dims_in"])), int(np.prod(dims["dims_out"]))
    if rep == "kraus":
        if not isinstance(obj["data"], list) or not obj["data"]:
            raise ChannelFormatError(["data: expected a non-empty list of Kraus operators"])
        ops = []
        for n, item in enumerate(obj["data"]):
            k = _decode(item, f"data[{n}]", failures)
            if k is not None and k.shape != (d_out, d_in):
                failures.append(f"data[{n}]: shape {k.shape} != {(d_out, d_in)}")
            ops.append(k)
        if failures:
            raise ChannelFormatError(failures)
        return Channel(dims["dims_in"], dims["dims_out"], kraus=ops)
    m = _decode(obj["data"], "data", failures)
    if failures:
        raise ChannelFormatError(failures)
    if rep == "choi":
        n = d_in * d_out
        if m.shape != (n, n):
            raise ChannelFormatError([f"data: Choi shape {m.shape} != {(n, n)}"])
        if not is_hermitian(m, 1e-10):
            raise ChannelFormatError(["data: Choi matrix is not Hermitian"])
        return Channel(dims["dims_in"], dims["dims_out"], choi=m)
    if m.shape != (d_out**2, d_in**2):
        raise ChannelFormatError([f"data: transfer shape {m.shape} != {(d_out**2, d_in**2)}"])
    if np.max(np.abs(m.imag)) > 1e-10:
        failures.append("data: transfer matrix of a Hermiticity-preserving map must be real")
        raise ChannelFormatError(failures)
    return Channel(dims["dims_in"], dims["dims_out"], transfer=m)


def load_channel(path) -> Channel:
    with open(path, encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ChannelFormatError([f"file: invalid JSON ({exc.msg} at line {exc.lineno})"]) from exc
    return channel_from_dict(obj)


def save_channel(ch: Channel, path, repr: str = "choi"):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(channel_to_dict(ch, repr), fh)
