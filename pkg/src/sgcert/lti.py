"""LTI system representation, realization, frequency response, stability checks.

Systems are continuous-time state-space models ``dx/dt = Ax + Bu, y = Cx + Du``
with square input/output dimension (n inputs, n outputs) and zero initial
condition. Rational transfer matrices are realized entry by entry in
controllable canonical form and aggregated block-diagonally; no minimal
realization reduction is attempted.

The frequency ``math.inf`` is an explicit sentinel: the response at infinite
frequency is the feedthrough matrix D.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import NamedTuple, Sequence

import numpy as np

__all__ = [
    "StateSpace",
    "RationalEntry",
    "RationalMatrixTF",
    "HurwitzResult",
    "realize",
    "evaluate_tf",
    "freq_response",
    "freq_response_grid",
    "hermitian_part",
    "is_hurwitz",
    "preset_tf",
    "preset_ss",
    "system_from_json",
    "system_to_json",
    "PRESET_NAMES",
]


@dataclass(frozen=True)
class StateSpace:
    """Real state-space realization (A, B, C, D) with n inputs and n outputs.

    A is m x m, B is m x n, C is n x m, D is n x n. Instances are immutable;
    all operations on them are pure functions.
    """

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        for name in ("A", "B", "C", "D"):
            arr = np.atleast_2d(np.asarray(getattr(self, name), dtype=float))
            object.__setattr__(self, name, arr)
        n = self.D.shape[0]
        # empty matrices arrive shapeless ((1, 0) or (0,)); fix them up for
        # the zero-state (static gain) case
        if self.A.size == 0 and self.A.shape != (0, 0):
            object.__setattr__(self, "A", np.zeros((0, 0)))
        if self.B.size == 0 and self.B.shape != (0, n):
            object.__setattr__(self, "B", np.zeros((0, n)))
        if self.C.size == 0 and self.C.shape != (n, 0):
            object.__setattr__(self, "C", np.zeros((n, 0)))
        for name in ("A", "B", "C", "D"):
            getattr(self, name).setflags(write=False)
        m = self.A.shape[0]
        if self.A.shape != (m, m):
            raise ValueError(f"A must be square, got {self.A.shape}")
        if self.D.shape != (n, n):
            raise ValueError(f"D must be square, got {self.D.shape}")
        if self.B.shape != (m, n):
            raise ValueError(
                f"B shape {self.B.shape} inconsistent with {m} states, {n} inputs"
            )
        if self.C.shape != (n, m):
            raise ValueError(
                f"C shape {self.C.shape} inconsistent with {n} outputs, {m} states"
            )

    @property
    def n_states(self) -> int:
        return self.A.shape[0]

    @property
    def n_io(self) -> int:
        return self.D.shape[0]

    @property
    def poles(self) -> np.ndarray:
        return np.linalg.eigvals(self.A)

    @staticmethod
    def static_gain(D) -> "StateSpace":
        D = np.atleast_2d(np.asarray(D, dtype=float))
        n = D.shape[0]
        return StateSpace(
            np.zeros((0, 0)), np.zeros((0, n)), np.zeros((n, 0)), D
        )


@dataclass(frozen=True)
class RationalEntry:
    """One scalar rational transfer function, coefficients in descending powers of s."""

    num: tuple
    den: tuple

    def __post_init__(self):
        num = tuple(float(x) for x in np.atleast_1d(self.num))
        den = tuple(float(x) for x in np.atleast_1d(self.den))
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)
        if len(den) == 0 or den[0] == 0.0:
            raise ValueError("denominator leading coefficient must be nonzero")
        if len(num) > len(den):
            raise ValueError(
                f"improper entry: deg num {len(num)-1} > deg den {len(den)-1}"
            )


@dataclass(frozen=True)
class RationalMatrixTF:
    """n x n grid of rational entries; every entry must be proper."""

    entries: tuple

    def __post_init__(self):
        rows = []
        for i, row in enumerate(self.entries):
            cells = []
            for j, cell in enumerate(row):
                if not isinstance(cell, RationalEntry):
                    try:
                        cell = RationalEntry(*cell)
                    except ValueError as exc:
                        raise ValueError(f"entry ({i},{j}): {exc}") from exc
                cells.append(cell)
            rows.append(tuple(cells))
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("transfer matrix must be square")
        object.__setattr__(self, "entries", tuple(rows))

    @property
    def n_io(self) -> int:
        return len(self.entries)


class HurwitzResult(NamedTuple):
    stable: bool
    abscissa: float


def _realize_entry(entry: RationalEntry):
    """Controllable canonical form of one proper scalar entry."""
    num = np.asarray(entry.num, dtype=float)
    den = np.asarray(entry.den, dtype=float)
    den = den / den[0]
    num = num / entry.den[0]
    k = len(den) - 1
    if k == 0:
        return (np.zeros((0, 0)), np.zeros((0, 1)), np.zeros((1, 0)),
                float(num[0]))
    if len(num) == len(den):
        d = float(num[0])
        rem = num - d * den
        rem = rem[1:]
    else:
        d = 0.0
        rem = num
    rem = np.concatenate([np.zeros(k - len(rem)), rem])
    A = np.zeros((k, k))
    if k > 1:
        A[:-1, 1:] = np.eye(k - 1)
    A[-1, :] = -den[:0:-1]
    B = np.zeros((k, 1))
    B[-1, 0] = 1.0
    C = rem[::-1].reshape(1, -1)
    return A, B, C, d


def realize(tf: RationalMatrixTF) -> StateSpace:
    """Realize a rational transfer matrix as a state-space model.

    Each entry is put in controllable canonical form and the per-entry blocks
    are aggregated block-diagonally, so the transfer matrix of the result
    equals ``tf`` entrywise.
    """
    n = tf.n_io
    blocks = [[_realize_entry(tf.entries[i][j]) for j in range(n)] for i in range(n)]
    m_total = sum(blocks[i][j][0].shape[0] for i in range(n) for j in range(n))
    A = np.zeros((m_total, m_total))
    B = np.zeros((m_total, n))
    C = np.zeros((n, m_total))
    D = np.zeros((n, n))
    ofs = 0
    for i in range(n):
        for j in range(n):
            a, b, c, d = blocks[i][j]
            k = a.shape[0]
            A[ofs:ofs + k, ofs:ofs + k] = a
            B[ofs:ofs + k, j:j + 1] = b
            C[i:i + 1, ofs:ofs + k] = c
            D[i, j] += d
            ofs += k
    return StateSpace(A, B, C, D)


def evaluate_tf(tf: RationalMatrixTF, s: complex) -> np.ndarray:
    """Direct rational evaluation of the transfer matrix at a complex point."""
    n = tf.n_io
    out = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            e = tf.entries[i][j]
            out[i, j] = np.polyval(e.num, s) / np.polyval(e.den, s)
    return out


def freq_response(sys: StateSpace, omega: float) -> np.ndarray:
    """Frequency response H(jw) = C (jwI - A)^{-1} B + D.

    ``omega = math.inf`` returns D. Raises if jw is an eigenvalue of A.
    """
    if math.isinf(omega):
        return sys.D.astype(complex)
    m = sys.n_states
    if m == 0:
        return sys.D.astype(complex)
    M = 1j * omega * np.eye(m) - sys.A
    try:
        X = np.linalg.solve(M, sys.B)
    except np.linalg.LinAlgError:
        raise ValueError(f"resolvent singular at omega={omega} rad/s") from None
    if not np.all(np.isfinite(X)):
        raise ValueError(f"resolvent singular at omega={omega} rad/s")
    return sys.C @ X + sys.D


def freq_response_grid(sys: StateSpace, omegas: Sequence[float]) -> np.ndarray:
    """Stacked responses (len(omegas), n, n) for a list of frequencies."""
    out = np.empty((len(omegas), sys.n_io, sys.n_io), dtype=complex)
    for k, w in enumerate(omegas):
        out[k] = freq_response(sys, w)
    return out


def hermitian_part(M: np.ndarray) -> np.ndarray:
    """Hermitian part (M + M*)/2 of a square complex matrix."""
    M = np.atleast_2d(np.asarray(M))
    if M.shape[0] != M.shape[1]:
        raise ValueError(f"matrix must be square, got {M.shape}")
    return (M + M.conj().T) / 2.0


def is_hurwitz(sys: StateSpace) -> HurwitzResult:
    """Whether all eigenvalues of A lie strictly in the open left half-plane.

    Returns the verdict together with the spectral abscissa max Re(eig(A)).
    Systems with zero states (static gains) are stable with abscissa -inf.
    """
    if sys.n_states == 0:
        return HurwitzResult(True, -math.inf)
    absc = float(np.max(np.real(np.linalg.eigvals(sys.A))))
    return HurwitzResult(absc < 0.0, absc)


# Preset transfer matrices used throughout the examples and the CLI.
_PRESETS = {
    "h1": (
        ((( 1.0,), (1.0, 10.0, 25.0)), ((3.0,), (1.0, 4.0, 4.0))),
        (((2.0,), (1.0, 10.0)),        ((4.0,), (1.0, 10.0, 25.0))),
    ),
    "h2": (
        ((( 1.0,), (1.0, 1.0)), (( 0.3,), (1.0, 2.0))),
        (((-0.2,), (1.0, 3.0)), (( 1.0,), (1.0, 1.0))),
    ),
}

PRESET_NAMES = tuple(sorted(_PRESETS))


def preset_tf(name: str) -> RationalMatrixTF:
    """Built-in 2x2 demo systems, by name ('h1' or 'h2')."""
    try:
        rows = _PRESETS[name.lower()]
    except KeyError:
        raise ValueError(
            f"unknown preset {name!r}; available: {', '.join(PRESET_NAMES)}"
        ) from None
    return RationalMatrixTF(rows)


def preset_ss(name: str) -> StateSpace:
    return realize(preset_tf(name))


def system_to_json(sys: StateSpace) -> dict:
    return {
        "kind": "ss",
        "A": sys.A.tolist(),
        "B": sys.B.tolist(),
        "C": sys.C.tolist(),
        "D": sys.D.tolist(),
    }


def system_from_json(obj) -> StateSpace:
    """Load a system from a JSON object, dict, file path, or preset name.

    Accepted forms: {"kind": "ss", "A": ..} | {"kind": "tf", "entries": [[{"num", "den"}..]..]}.
    """
    if isinstance(obj, str):
        if obj.lower() in _PRESETS:
            return preset_ss(obj)
        with open(obj, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    if not isinstance(obj, dict):
        raise ValueError("system spec must be a dict, path, or preset name")
    kind = obj.get("kind")
    if kind == "ss":
        return StateSpace(
            np.asarray(obj["A"], float), np.asarray(obj["B"], float),
            np.asarray(obj["C"], float), np.asarray(obj["D"], float),
        )
    if kind == "tf":
        rows = []
        for row in obj["entries"]:
            rows.append(tuple(RationalEntry(tuple(e["num"]), tuple(e["den"])) for e in row))
        return realize(RationalMatrixTF(tuple(rows)))
    raise ValueError(f"unknown system kind {kind!r}")
