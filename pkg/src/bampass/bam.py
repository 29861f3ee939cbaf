"""Two-layer bidirectional associative memory over bipolar patterns.

Storage is the Hebbian outer-product sum W = scale * sum_i a_i^T b_i.
Recall alternates synchronous whole-layer updates

    B <- sgn(A . W)   and   A <- sgn(B . W^T)

where sgn keeps a unit's previous state on a zero field. Every half-step
that changes anything strictly lowers the integer energy E = -A.W.B^T,
so recall always lands on a fixed point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product

import numpy as np

from .core import (
    DimensionMismatchError,
    IntMatrix,
    IntVector,
    _freeze,
    as_bipolar,
)


class EmptyMemoryError(ValueError):
    """Operation needs at least one stored pair."""


class SizeLimitError(ValueError):
    """Exhaustive enumeration refused: state space too large."""


@dataclass(frozen=True)
class PatternPair:
    """One stored association (a, b); a drives the A layer, b the B layer."""

    a: IntVector
    b: IntVector

    def __post_init__(self):
        object.__setattr__(self, "a", as_bipolar(self.a))
        object.__setattr__(self, "b", as_bipolar(self.b))

    def swapped(self) -> "PatternPair":
        return PatternPair(self.b, self.a)

    def negated(self) -> "PatternPair":
        return PatternPair(-self.a, -self.b)


@dataclass(frozen=True)
class BamMemory:
    """Immutable trained state: the m x n integer weight matrix plus bookkeeping.

    Cells of a memory built purely by encode/add_pair are bounded by
    pair_count * scale. remove_pair subtracts unconditionally (no membership
    check), so removing a never-stored pair leaves valid arithmetic but a
    matrix that no longer corresponds to any pair set.
    """

    weights: IntMatrix
    pair_count: int
    scale: int = 1

    def __post_init__(self):
        w = np.array(self.weights, dtype=np.int64)
        if w.ndim != 2 or w.shape[0] < 1 or w.shape[1] < 1:
            raise ValueError(f"weights must be 2-D and non-empty, got shape {w.shape}")
        if self.pair_count < 0:
            raise ValueError("pair_count must be >= 0")
        if self.scale < 1:
            raise ValueError("scale must be a positive integer")
        object.__setattr__(self, "weights", _freeze(w))

    @property
    def m(self) -> int:
        return self.weights.shape[0]

    @property
    def n(self) -> int:
        return self.weights.shape[1]

    @classmethod
    def empty(cls, m: int, n: int, scale: int = 1) -> "BamMemory":
        return cls(np.zeros((m, n), dtype=np.int64), pair_count=0, scale=scale)

    def transposed(self) -> "BamMemory":
        """The dual memory: same pairs with sides swapped."""
        return BamMemory(self.weights.T.copy(), self.pair_count, self.scale)


@dataclass(frozen=True)
class RecallOptions:
    """Knobs for the recall loop.

    initial_b seeds the "previous B" used by the very first tie decision of
    recall(); initial_a plays the same role for recall_from_b(). When absent,
    a constant tie_default vector is used, which keeps recall deterministic.
    """

    max_sweeps: int = 100
    initial_b: IntVector | None = None
    initial_a: IntVector | None = None
    tie_default: int = 1

    def __post_init__(self):
        if self.max_sweeps < 1:
            raise ValueError("max_sweeps must be >= 1")
        if self.tie_default not in (-1, 1):
            raise ValueError("tie_default must be -1 or +1")
        if self.initial_b is not None:
            object.__setattr__(self, "initial_b", as_bipolar(self.initial_b))
        if self.initial_a is not None:
            object.__setattr__(self, "initial_a", as_bipolar(self.initial_a))


DEFAULT_OPTIONS = RecallOptions()


@dataclass(frozen=True)
class RecallResult:
    """Endpoint of one recall run.

    converged means one additional sweep would change neither layer.
    energy_trace holds E = -A.W.B^T after every half-step (2 per sweep)
    and is non-increasing.
    """

    a_final: IntVector
    b_final: IntVector
    sweeps: int
    converged: bool
    energy_trace: tuple[int, ...] = field(repr=False)


def _check_pair_dims(pair: PatternPair, m: int, n: int) -> None:
    if pair.a.size != m or pair.b.size != n:
        raise DimensionMismatchError(
            f"pair has dims ({pair.a.size}, {pair.b.size}), memory expects ({m}, {n})"
        )


def _as_pair(p) -> PatternPair:
    if isinstance(p, PatternPair):
        return p
    a, b = p
    return PatternPair(a, b)


def encode(pairs, scale: int = 1) -> BamMemory:
    """Build a memory from pattern pairs: W = scale * sum_i outer(a_i, b_i)."""
    plist = [_as_pair(p) for p in pairs]
    if not plist:
        raise ValueError("encode requires at least one pattern pair")
    m, n = plist[0].a.size, plist[0].b.size
    for p in plist:
        _check_pair_dims(p, m, n)
    a_stack = np.stack([p.a for p in plist])
    b_stack = np.stack([p.b for p in plist])
    weights = scale * (a_stack.T @ b_stack)
    return BamMemory(weights, pair_count=len(plist), scale=scale)


def add_pair(mem: BamMemory, pair) -> BamMemory:
    """Superimpose one more association onto the memory."""
    p = _as_pair(pair)
    _check_pair_dims(p, mem.m, mem.n)
    weights = mem.weights + mem.scale * np.outer(p.a, p.b)
    return BamMemory(weights, mem.pair_count + 1, mem.scale)


def remove_pair(mem: BamMemory, pair) -> BamMemory:
    """Subtract an association (inverse of add_pair; no membership check)."""
    if mem.pair_count < 1:
        raise EmptyMemoryError("cannot remove a pair from an empty memory")
    p = _as_pair(pair)
    _check_pair_dims(p, mem.m, mem.n)
    weights = mem.weights - mem.scale * np.outer(p.a, p.b)
    return BamMemory(weights, mem.pair_count - 1, mem.scale)


def sign_threshold(field_vec, previous) -> IntVector:
    """Per-unit threshold: +1 if field > 0, -1 if field < 0, previous if 0."""
    f = np.asarray(field_vec, dtype=np.int64)
    prev = as_bipolar(previous)
    if f.ndim != 1 or f.size != prev.size:
        raise DimensionMismatchError(
            f"field has length {f.size}, previous state has length {prev.size}"
        )
    return _freeze(np.where(f > 0, 1, np.where(f < 0, -1, prev)).astype(np.int64))


def energy(mem: BamMemory, a, b) -> int:
    """E = -(a . W . b^T), exact integer; stored pairs sit at local minima."""
    aa = as_bipolar(a)
    ba = as_bipolar(b)
    if aa.size != mem.m or ba.size != mem.n:
        raise DimensionMismatchError(
            f"states have dims ({aa.size}, {ba.size}), memory expects ({mem.m}, {mem.n})"
        )
    return -int(aa @ mem.weights @ ba)


def is_fixed_point(mem: BamMemory, a, b) -> bool:
    """True iff a full sweep starting from (a, b) changes neither layer."""
    aa = as_bipolar(a)
    ba = as_bipolar(b)
    if aa.size != mem.m or ba.size != mem.n:
        raise DimensionMismatchError(
            f"states have dims ({aa.size}, {ba.size}), memory expects ({mem.m}, {mem.n})"
        )
    b_next = sign_threshold(aa @ mem.weights, ba)
    if not np.array_equal(b_next, ba):
        return False
    a_next = sign_threshold(ba @ mem.weights.T, aa)
    return np.array_equal(a_next, aa)


def recall(mem: BamMemory, start_a, opts: RecallOptions = DEFAULT_OPTIONS) -> RecallResult:
    """Iterate B <- sgn(A.W), A <- sgn(B.W^T) from start_a to a fixed point.

    The first B update has no previous B state; opts.initial_b (or a constant
    tie_default vector) stands in for it. Non-convergence within max_sweeps is
    reported via converged=False, never raised.
    """
    a = as_bipolar(start_a)
    if a.size != mem.m:
        raise DimensionMismatchError(f"probe has length {a.size}, memory expects {mem.m}")
    if opts.initial_b is not None:
        if opts.initial_b.size != mem.n:
            raise DimensionMismatchError(
                f"initial_b has length {opts.initial_b.size}, memory expects {mem.n}"
            )
        b = opts.initial_b
    else:
        b = _freeze(np.full(mem.n, opts.tie_default, dtype=np.int64))

    w = mem.weights
    trace: list[int] = []
    sweeps = 0
    converged = False
    while sweeps < opts.max_sweeps:
        b = sign_threshold(a @ w, b)
        trace.append(-int(a @ w @ b))
        a_next = sign_threshold(b @ w.T, a)
        trace.append(-int(a_next @ w @ b))
        sweeps += 1
        # If A did not move, the tie rule pins the next sweep to (a, b) exactly;
        # otherwise fall back to the explicit two-half-step check.
        if np.array_equal(a_next, a) or is_fixed_point(mem, a_next, b):
            a = a_next
            converged = True
            break
        a = a_next
    return RecallResult(a, b, sweeps, converged, tuple(trace))


def recall_from_b(mem: BamMemory, start_b, opts: RecallOptions = DEFAULT_OPTIONS) -> RecallResult:
    """Recall driven from the B layer: A <- sgn(B.W^T) leads each sweep."""
    mirrored_opts = RecallOptions(
        max_sweeps=opts.max_sweeps,
        initial_b=opts.initial_a,
        tie_default=opts.tie_default,
    )
    res = recall(mem.transposed(), start_b, mirrored_opts)
    return RecallResult(
        a_final=res.b_final,
        b_final=res.a_final,
        sweeps=res.sweeps,
        converged=res.converged,
        energy_trace=res.energy_trace,
    )


def _all_bipolar(k: int) -> np.ndarray:
    """All 2^k bipolar vectors of length k, one per row, lexicographic."""
    codes = np.arange(2**k, dtype=np.int64)[:, None]
    bits = (codes >> np.arange(k - 1, -1, -1)) & 1
    return bits * 2 - 1


def enumerate_fixed_points(mem: BamMemory, limit: int = 24) -> set[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Exhaustive fixed-point set over all 2^m * 2^n state pairs.

    Brute-force oracle for testing recall; guarded because the state space
    (and for degenerate weight matrices the result itself) is exponential.
    """
    if mem.m + mem.n > limit:
        raise SizeLimitError(f"m + n = {mem.m + mem.n} exceeds enumeration limit {limit}")
    w = mem.weights
    found: set[tuple[tuple[int, ...], tuple[int, ...]]] = set()
    a_rows = _all_bipolar(mem.m)
    fields = a_rows @ w
    for a_row, f in zip(a_rows, fields):
        # B states compatible with a zero-tie sign threshold of this field:
        # forced to sign(f) where f != 0, free where f == 0.
        zero_idx = np.flatnonzero(f == 0)
        forced = np.where(f >= 0, 1, -1).astype(np.int64)
        combos = list(product((-1, 1), repeat=zero_idx.size))
        b_candidates = np.tile(forced, (len(combos), 1))
        if zero_idx.size:
            b_candidates[:, zero_idx] = np.array(combos, dtype=np.int64)
        g = b_candidates @ w.T
        ok = np.all((g == 0) | (np.sign(g) == a_row), axis=1)
        a_key = tuple(int(x) for x in a_row)
        for b_row in b_candidates[ok]:
            found.add((a_key, tuple(int(x) for x in b_row)))
    return found
