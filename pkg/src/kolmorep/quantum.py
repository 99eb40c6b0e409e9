"""Finite-dimensional operator algebra for two-outcome measurement statistics.

Everything here is dense complex linear algebra on desk-scale systems (a few
qubits): spin-1/2 projectors, Kronecker products, the singlet density matrix,
trace-rule probabilities and commutation tests. Operators are immutable
values; the ``projector`` and ``density`` tags are verified at construction
rather than trusted from input files.
"""

from __future__ import annotations

from math import atan2, cos, sin, sqrt
from typing import Iterable, Sequence

import numpy as np

from .errors import DimMismatch, InvalidDirection, KolmorepError

TAU_OP = 1e-9  # Frobenius tolerance for operator identities
TAU_PROB = 1e-9  # tolerance for probability values

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _frobenius(m: np.ndarray) -> float:
    return float(np.linalg.norm(m))


def is_projector_matrix(m: np.ndarray, tol: float = TAU_OP) -> bool:
    return _frobenius(m @ m - m) <= tol and _frobenius(m - m.conj().T) <= tol


def is_density_matrix(m: np.ndarray, tol: float = TAU_OP) -> bool:
    if _frobenius(m - m.conj().T) > tol:
        return False
    if abs(np.trace(m).real - 1.0) > tol or abs(np.trace(m).imag) > tol:
        return False
    return bool(np.linalg.eigvalsh(m).min() >= -tol)


class Operator:
    """Immutable square complex matrix with optionally validated tags."""

    __slots__ = ("_entries", "_tags")

    def __init__(self, entries, *, tags: Iterable[str] = ()) -> None:
        m = np.array(entries, dtype=complex)
        if m.ndim != 2 or m.shape[0] != m.shape[1] or m.shape[0] < 1:
            raise KolmorepError(f"operator entries must be a square matrix, got shape {m.shape}")
        if not np.all(np.isfinite(m.view(float))):
            raise KolmorepError("operator entries must be finite")
        tags = frozenset(tags)
        for tag in tags:
            if tag == "projector":
                if not is_projector_matrix(m):
                    raise KolmorepError("matrix is not idempotent-Hermitian within tolerance")
            elif tag == "density":
                if not is_density_matrix(m):
                    raise KolmorepError("matrix is not a unit-trace positive Hermitian within tolerance")
            else:
                raise KolmorepError(f"unknown operator tag {tag!r}")
        m.flags.writeable = False
        self._entries = m
        self._tags = tags

    @property
    def dim(self) -> int:
        return self._entries.shape[0]

    @property
    def entries(self) -> np.ndarray:
        return self._entries

    @property
    def tags(self) -> frozenset:
        return self._tags

    def has_tag(self, tag: str) -> bool:
        return tag in self._tags

    def __repr__(self) -> str:
        tags = f", tags={sorted(self._tags)}" if self._tags else ""
        return f"Operator(dim={self.dim}{tags})"


def operator(entries) -> Operator:
    return Operator(entries)


def projector(entries) -> Operator:
    return Operator(entries, tags=("projector",))


def density(entries) -> Operator:
    return Operator(entries, tags=("density",))


def identity(dim: int) -> Operator:
    return Operator(np.eye(dim, dtype=complex), tags=("projector",))


def complement(p: Operator) -> Operator:
    """Orthogonal complement I - P of a projector."""
    if not p.has_tag("projector"):
        raise KolmorepError("complement is only defined for projectors")
    return Operator(np.eye(p.dim, dtype=complex) - p.entries, tags=("projector",))


def direction(theta: float, phi: float = 0.0) -> np.ndarray:
    """Unit vector at polar angle theta, azimuth phi."""
    return np.array([sin(theta) * cos(phi), sin(theta) * sin(phi), cos(theta)])


def _as_unit_vector(d: Sequence[float]) -> np.ndarray:
    v = np.asarray(d, dtype=float)
    if v.shape != (3,) or not np.all(np.isfinite(v)):
        raise InvalidDirection(f"direction must be a finite 3-vector, got {d!r}")
    norm = sqrt(float(v @ v))
    if abs(norm - 1.0) > 1e-12:
        raise InvalidDirection(f"direction must have unit norm, got |d| = {norm}")
    return v


def spin_projector_up(d: Sequence[float]) -> Operator:
    """Rank-1 projector onto the spin-up eigenspace along a unit direction.

    Closed form (I + d . sigma)/2; no eigen-decomposition involved.
    """
    v = _as_unit_vector(d)
    m = 0.5 * (np.eye(2, dtype=complex) + v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z)
    return Operator(m, tags=("projector",))


def _spin_up_state(d: Sequence[float]) -> np.ndarray:
    v = _as_unit_vector(d)
    theta = atan2(sqrt(v[0] ** 2 + v[1] ** 2), v[2])
    phi = atan2(v[1], v[0])
    return np.array([cos(theta / 2), np.exp(1j * phi) * sin(theta / 2)])


def tensor(x: Operator, y: Operator) -> Operator:
    """Kronecker product. The product of projectors is again a projector."""
    tags = ("projector",) if x.has_tag("projector") and y.has_tag("projector") else ()
    return Operator(np.kron(x.entries, y.entries), tags=tags)


def singlet_density(axis: Sequence[float] = (0.0, 0.0, 1.0)) -> Operator:
    """Density matrix of the two-spin singlet.

    The construction uses the up/down basis along ``axis``, but the result is
    the same matrix for every axis: the singlet is rotation invariant.
    """
    up = _spin_up_state(axis)
    down = np.array([-np.conj(up[1]), np.conj(up[0])])
    psi = (np.kron(up, down) - np.kron(down, up)) / sqrt(2.0)
    return Operator(np.outer(psi, psi.conj()), tags=("density",))


def born(w: Operator, projectors: Sequence[Operator]) -> float:
    """Real part of tr(W P_1 ... P_k).

    For pairwise commuting projectors this is a probability in [0, 1] up to
    TAU_PROB; for non-commuting lists it is still a well-defined real number
    but has no direct probabilistic reading. The empty list gives tr(W) = 1.
    """
    if not w.has_tag("density"):
        raise KolmorepError("born rule expects a density operator")
    prod = w.entries
    for p in projectors:
        if p.dim != w.dim:
            raise DimMismatch(f"projector dim {p.dim} does not match state dim {w.dim}")
        prod = prod @ p.entries
    return float(np.trace(prod).real)


def commutes(x: Operator, y: Operator) -> bool:
    """True iff the commutator vanishes in Frobenius norm within TAU_OP."""
    if x.dim != y.dim:
        raise DimMismatch(f"cannot compare operators of dims {x.dim} and {y.dim}")
    return _frobenius(x.entries @ y.entries - y.entries @ x.entries) <= TAU_OP
