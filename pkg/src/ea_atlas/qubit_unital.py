"""Unital qubit maps ``Upsilon`` with Bloch-axis scalings ``(l1, l2, l3)``.

In the canonical frame ``Upsilon[X] = 1/2 sum_j l_j tr(sigma_j X) sigma_j``
with ``l_0 = 1``. The closed-form predicates below classify ``Upsilon`` and
the pair ``Upsilon (x) Upsilon``.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .channels import Channel

SLACK = 1e-12


@dataclass(frozen=True)
class LambdaTriple:
    l1: float
    l2: float
    l3: float

    def __iter__(self):
        return iter((self.l1, self.l2, self.l3))


def to_channel(t: LambdaTriple) -> Channel:
    """Qubit map with Pauli-basis transfer matrix ``diag(1, l1, l2, l3)``."""
    return Channel((2,), (2,), transfer=np.diag([1.0, *t]), label=f"Upsilon{tuple(t)}")


@dataclass(frozen=True)
class QubitClassification:
    positive: bool
    cp: bool
    eb: bool
    pair_positive: bool
    pair_pea: bool
    pair_ea: bool

    def to_dict(self) -> dict:
        return asdict(self)


def is_positive(t) -> bool:
    return all(abs(x) <= 1 + SLACK for x in t)


def is_cp(t) -> bool:
    l1, l2, l3 = t
    return all(1 + sign * l3 + SLACK >= abs(l1 + sign * l2) for sign in (1, -1))


def is_eb(t) -> bool:
    return sum(abs(x) for x in t) <= 1 + SLACK


def pair_positive(t) -> bool:
    """``Upsilon o Upsilon`` is CP (squared scalings satisfy the CP inequality)."""
    l1, l2, l3 = (x * x for x in t)
    return all(1 + sign * l3 + SLACK >= abs(l1 + sign * l2) for sign in (1, -1))


def pair_pea(t) -> bool:
    """``Upsilon o Upsilon`` is EB: ``l1^2 + l2^2 + l3^2 <= 1``."""
    return sum(x * x for x in t) <= 1 + SLACK


def classify(t: LambdaTriple) -> QubitClassification:
    cp, pea = is_cp(t), pair_pea(t)
    return QubitClassification(
        positive=is_positive(t),
        cp=cp,
        eb=is_eb(t),
        pair_positive=pair_positive(t),
        pair_pea=pea,
        pair_ea=cp and pea,
    )


def canonical_frame(ch: Channel, tol: float = 1e-10):
    """Reduce a unital qubit map to ``(U, triple, V)`` with ``T = U diag(triple) V``.

    ``T`` is the 3x3 Bloch block of the transfer matrix. ``U`` and ``V`` are
    rotations; a reflection is absorbed into the sign of ``l3``.
    """
    if ch.dims_in != (2,) or ch.dims_out != (2,):
        raise ValueError("expected a single-qubit map")
    e = np.real_if_close(ch.transfer, tol=1e6)
    if np.iscomplexobj(e) or np.max(np.abs(e[0, 1:])) > tol or np.max(np.abs(e[1:, 0])) > tol:
        raise ValueError("map is not unital and trace preserving")
    block = np.asarray(e[1:, 1:], dtype=float)
    u, sv, vt = np.linalg.svd(block)
    flip = np.diag([1.0, 1.0, -1.0])
    if np.linalg.det(u) < 0:
        u = u @ flip
        sv = sv * np.array([1.0, 1.0, -1.0])
    if np.linalg.det(vt) < 0:
        vt = flip @ vt
        sv = sv * np.array([1.0, 1.0, -1.0])
    return u, LambdaTriple(*(float(x) for x in sv)), vt
