"""Block stratification of square matrices.

``partition_of(A)`` is the coarsest partition ``pi`` of the index set such
that ``A`` is constant on every block ``I x J``; equivalently, the
partition of indices into classes of equal rows (for Hermitian input).
Compression averages a block-constant matrix down to its ``|pi| x |pi|``
core and inflation is the reverse embedding.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np
from scipy.cluster.hierarchy import DisjointSet

from .linalg import DEFAULT_TOL, ToleranceProfile, numeric_rank
from .validation import check_square, is_rational

__all__ = [
    "Partition",
    "StratumDiagnostics",
    "partition_of",
    "refines",
    "compress",
    "inflate",
    "compress_weighted",
    "inflate_weighted",
    "rank_on_stratum",
    "block_lmi_constant",
    "block_lmi_check",
    "closure_membership",
    "is_block_constant",
]


@dataclass(frozen=True)
class Partition:
    """A set partition of ``{0, ..., N-1}``, blocks sorted by smallest element.

    Indices are 0-based in the API; :meth:`to_dict` emits 1-based blocks.
    """

    blocks: tuple
    N: int

    def __post_init__(self):
        blocks = tuple(tuple(sorted(int(i) for i in b)) for b in self.blocks)
        if any(len(b) == 0 for b in blocks):
            raise ValueError("blocks must be non-empty")
        flat = sorted(i for b in blocks for i in b)
        if flat != list(range(self.N)):
            raise ValueError(f"blocks must partition range({self.N}), got {blocks}")
        object.__setattr__(self, "blocks", tuple(sorted(blocks)))

    @classmethod
    def from_labels(cls, labels: Sequence[int]) -> "Partition":
        groups: dict = {}
        for i, lab in enumerate(labels):
            groups.setdefault(lab, []).append(i)
        return cls(tuple(groups.values()), len(labels))

    @classmethod
    def from_blocks(cls, blocks, *, one_based: bool = False) -> "Partition":
        shift = 1 if one_based else 0
        blocks = [[int(i) - shift for i in b] for b in blocks]
        N = sum(len(b) for b in blocks)
        return cls(tuple(blocks), N)

    @classmethod
    def singletons(cls, N: int) -> "Partition":
        return cls(tuple((i,) for i in range(N)), N)

    @classmethod
    def whole(cls, N: int) -> "Partition":
        return cls((tuple(range(N)),), N)

    def __len__(self) -> int:
        return len(self.blocks)

    @property
    def sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)

    def labels(self) -> np.ndarray:
        lab = np.empty(self.N, dtype=int)
        for k, b in enumerate(self.blocks):
            lab[list(b)] = k
        return lab

    def to_dict(self) -> dict:
        return {"blocks": [[i + 1 for i in b] for b in self.blocks], "size": len(self)}


def refines(pi: Partition, pi_prime: Partition) -> bool:
    """True iff every block of ``pi`` lies inside a block of ``pi_prime``."""
    if pi.N != pi_prime.N:
        raise ValueError(f"ground sets differ: {pi.N} vs {pi_prime.N}")
    lab = pi_prime.labels()
    return all(len({lab[i] for i in b}) == 1 for b in pi.blocks)


def _row_tol(arr, tol: ToleranceProfile) -> float:
    return tol.row_eq * (1.0 + float(np.max(np.abs(arr))))


def is_block_constant(A, pi: Partition, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    arr = check_square(A, allow_object=True)
    if arr.shape[0] != pi.N:
        raise ValueError("partition and matrix sizes differ")
    exact = arr.dtype == object
    thr = 0 if exact else 2 * _row_tol(arr, tol)
    for I in pi.blocks:
        for J in pi.blocks:
            blk = arr[np.ix_(I, J)]
            if exact:
                if len(set(blk.ravel().tolist())) > 1:
                    return False
            elif np.max(np.abs(blk - blk.flat[0])) > thr:
                return False
    return True


def partition_of(A, tol: ToleranceProfile = DEFAULT_TOL) -> Partition:
    """The coarsest partition on whose blocks ``A`` is constant.

    Indices ``i, j`` are merged when row ``i`` equals row ``j`` and column
    ``i`` equals column ``j`` (within ``row_eq`` scaled by ``1 + max|a|``;
    exactly for rational input). If tolerance chaining breaks constancy,
    indices are regrouped against a fixed representative per class.
    """
    arr = check_square(A, allow_object=True)
    N = arr.shape[0]
    exact = arr.dtype == object
    thr = 0 if exact else _row_tol(arr, tol)

    def same(i, j):
        if exact:
            return list(arr[i]) == list(arr[j]) and list(arr[:, i]) == list(arr[:, j])
        return np.max(np.abs(arr[i] - arr[j])) <= thr and np.max(np.abs(arr[:, i] - arr[:, j])) <= thr

    ds = DisjointSet(range(N))
    for i in range(N):
        for j in range(i):
            if not ds.connected(i, j) and same(i, j):
                ds.merge(i, j)
    pi = Partition(tuple(tuple(s) for s in ds.subsets()), N)
    if is_block_constant(arr, pi, tol):
        return pi
    reps: list = []
    labels = []
    for i in range(N):
        for k, r in enumerate(reps):
            if same(i, r):
                labels.append(k)
                break
        else:
            reps.append(i)
            labels.append(len(reps) - 1)
    return Partition.from_labels(labels)


def _block_sizes_ok(arr: np.ndarray, pi: Partition, rows: int):
    if rows != pi.N:
        raise ValueError(f"matrix has size {rows}, partition covers {pi.N} indices")


def compress(A, pi: Partition) -> np.ndarray:
    """Block averages: ``b_ij`` is the mean of ``A`` over ``I_i x I_j``."""
    arr = check_square(A, allow_object=True)
    _block_sizes_ok(arr, pi, arr.shape[0])
    m = len(pi)
    out = np.empty((m, m), dtype=arr.dtype)
    for i, I in enumerate(pi.blocks):
        for j, J in enumerate(pi.blocks):
            blk = arr[np.ix_(I, J)]
            if arr.dtype == object:
                out[i, j] = sum(blk.ravel().tolist(), Fraction(0)) / blk.size
            else:
                out[i, j] = blk.mean()
    return out


def inflate(B, pi: Partition) -> np.ndarray:
    arr = check_square(B, name="B", allow_object=True)
    if arr.shape[0] != len(pi):
        raise ValueError(f"B is {arr.shape[0]}x{arr.shape[0]} but the partition has {len(pi)} blocks")
    lab = pi.labels()
    return arr[np.ix_(lab, lab)].copy()


def _weights(pi: Partition, exact: bool):
    """``sqrt(|I_i| |I_j|)`` as an exact table when every product is a square."""
    sizes = pi.sizes
    if exact:
        table = []
        for a in sizes:
            row = []
            for b in sizes:
                r = math.isqrt(a * b)
                if r * r != a * b:
                    return None
                row.append(r)
            table.append(row)
        return np.array(table, dtype=object)
    s = np.sqrt(np.array(sizes, dtype=float))
    return np.outer(s, s)


def compress_weighted(A, pi: Partition) -> np.ndarray:
    """``D^{1/2} compress(A) D^{1/2}`` with ``D = diag(|I_k|)``; respects matrix products.

    Rational input stays exact only when every ``|I_i| |I_j|`` is a perfect square.
    """
    core = compress(A, pi)
    W = _weights(pi, core.dtype == object)
    if W is None:
        core, W = core.astype(float), _weights(pi, False)
    return core * W


def inflate_weighted(B, pi: Partition) -> np.ndarray:
    arr = check_square(B, name="B", allow_object=True)
    if arr.shape[0] != len(pi):
        raise ValueError(f"B is {arr.shape[0]}x{arr.shape[0]} but the partition has {len(pi)} blocks")
    W = _weights(pi, arr.dtype == object)
    if W is None:
        arr, W = arr.astype(float), _weights(pi, False)
    if arr.dtype == object:
        return inflate(np.array([[Fraction(x) / w for x, w in zip(r, wr)] for r, wr in zip(arr, W)], dtype=object), pi)
    return inflate(arr / W, pi)


def closure_membership(pi: Partition, A, tol: ToleranceProfile = DEFAULT_TOL) -> bool:
    """``A`` lies in the closure of the stratum of ``pi``, i.e. is constant on ``pi``'s blocks."""
    return is_block_constant(A, pi, tol)


@dataclass
class StratumDiagnostics:
    partition: Partition
    compressed: np.ndarray
    predicted_rank: int
    rank_f: int
    rank_h: int
    rank_g: int
    g_clause_applies: bool

    @property
    def consistent(self) -> bool:
        ok = self.rank_f == self.rank_h == self.predicted_rank
        if self.g_clause_applies:
            ok = ok and self.rank_g == self.predicted_rank
        return ok

    def to_dict(self) -> dict:
        arr = self.compressed
        return {
            "partition": self.partition.to_dict(),
            "compressed": [[_jsonable(x) for x in row] for row in arr.tolist()],
            "predictedRank": self.predicted_rank,
            "rankF": self.rank_f,
            "rankH": self.rank_h,
            "rankG": self.rank_g,
            "gClauseApplies": self.g_clause_applies,
            "consistent": self.consistent,
        }


def _jsonable(x):
    if isinstance(x, complex):
        return [x.real, x.imag]
    if is_rational(x):
        return str(x)
    return float(x)


def _has_distinct_entry_row(arr, tol) -> bool:
    thr = _row_tol(arr, tol)
    for row in arr:
        vals = np.sort_complex(row) if np.iscomplexobj(row) else np.sort(row)
        if np.all(np.abs(np.diff(vals)) > thr):
            return True
    return False


def rank_on_stratum(spec, A, tol: ToleranceProfile = DEFAULT_TOL) -> StratumDiagnostics:
    """Measure the ranks of ``f[A]``, ``h[A]`` and ``g[A]`` against ``|pi(A)|``.

    The ``g`` clause is only expected when ``A`` has repeated rows or a row
    with pairwise distinct entries.
    """
    from .preserver import apply_entrywise, check_test_matrix, threshold_C

    arr = check_test_matrix(spec, A, tol)
    C = threshold_C(spec)
    if not spec.cprime > -1 / C:
        raise ValueError(f"need c' > -1/C = {-1 / C}, got {spec.cprime}")
    if np.any(np.all(np.abs(arr) <= _row_tol(arr, tol), axis=1)) and spec.exponents[0] != 0:
        raise ValueError("A has a zero row, which requires n_0 = 0")
    pi = partition_of(arr, tol)
    m = len(pi)
    return StratumDiagnostics(
        partition=pi,
        compressed=compress(arr, pi),
        predicted_rank=m,
        rank_f=numeric_rank(apply_entrywise(spec, arr, part="f"), tol),
        rank_h=numeric_rank(apply_entrywise(spec, arr, part="h"), tol),
        rank_g=numeric_rank(apply_entrywise(spec, arr, part="g"), tol),
        g_clause_applies=m < arr.shape[0] or _has_distinct_entry_row(arr, tol),
    )


def _truncate(spec, m: int, terms: str):
    from .preserver import PreserverSpec

    N = spec.N
    if not 1 <= m <= N:
        raise ValueError(f"truncation length must be in [1, {N}], got {m}")
    if terms == "prefix":
        sl = slice(0, m)
    elif terms == "suffix":
        sl = slice(N - m, N)
    else:
        raise ValueError(f"terms must be 'prefix' or 'suffix', got {terms!r}")
    return PreserverSpec(spec.coeffs[sl], spec.exponents[sl], spec.M, 0, spec.testset, spec.rho)


def block_lmi_constant(pi, spec, *, terms: str = "prefix"):
    """Threshold constant of the ``m``-term preserver, ``m = |pi|``.

    ``terms`` picks the first ``m`` terms (``"prefix"``) or the last ``m``
    (``"suffix"``). Both give a valid LMI on the closure of the stratum;
    only the suffix constant is guaranteed to be strictly below the full one.
    """
    from .preserver import threshold_C

    m = len(pi) if isinstance(pi, Partition) else int(pi)
    return threshold_C(_truncate(spec, m, terms))


def block_lmi_check(pi: Partition, spec, A, tol: ToleranceProfile = DEFAULT_TOL, *, terms: str = "prefix") -> bool:
    """``A^{o M} <= C_m sum_{j in terms} c_j A^{o n_j}`` for ``A`` in the closure of ``pi``'s stratum."""
    from .linalg import loewner_geq
    from .preserver import apply_entrywise, hadamard_power

    arr = check_square(A, allow_object=True)
    if arr.dtype == object:
        arr = arr.astype(float)
    if not closure_membership(pi, arr, tol):
        raise ValueError("A is not constant on the blocks of the partition")
    short = _truncate(spec, len(pi), terms)
    C = float(block_lmi_constant(pi, spec, terms=terms))
    return loewner_geq(C * apply_entrywise(short, arr, part="h"), hadamard_power(arr, spec.M), tol)
