"""Lindblad channel sets, random Kossakowski couplings, and the adjoint
Liouvillian superoperator in the normalized Pauli-string basis.

The generator acts on observables (Heisenberg convention). Its matrix over
the normalized string basis S_y is

    L[y, x] = Tr( S_y . sum_{n,m} K[n,m] ( L_m S_x L_n - 1/2 {L_m L_n, S_x} ) )

and is assembled exactly from Pauli multiplication phases: every channel
pair (n, m) maps the input string x to the single output string
y = x xor (m xor n) in the symplectic encoding, so no dense 2^l matrices
are needed. With K positive semidefinite the spectrum lies in the closed
left half plane and the identity string spans the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import pauli
from .pauli import PauliString
from .topology import Topology

MAX_DENSE_SITES = 6

SPECTRUM_KINDS = ("uniform", "exponential", "degenerate")


@dataclass(frozen=True)
class LindbladSet:
    """Ordered dissipation channels, each a Pauli string on l sites."""

    sites: int
    operators: tuple[PauliString, ...]
    body_order: int  # 1 or 2
    topology: Topology | None = None

    @property
    def count(self) -> int:
        return len(self.operators)

    def mean_diagonal(self) -> float:
        """d = 2^l / N, the mean Kossakowski diagonal after normalization."""
        return 2**self.sites / self.count


def build_one_body_set(sites: int) -> LindbladSet:
    """The 3l single-site channels, ordered by canonical string index.

    Ascending index order places X on the last site first and Z on the
    first site last.
    """
    if not 1 <= sites <= pauli.MAX_SITES:
        raise ValueError(f"supported sizes are 1..{pauli.MAX_SITES}, got {sites}")
    ops = sorted(pauli.enumerate_strings(sites, order=1), key=lambda s: s.index)
    return LindbladSet(sites, tuple(ops), body_order=1)


def build_two_body_set(topo: Topology) -> LindbladSet:
    """One-body channels plus, per topology edge, the 9 strings with
    non-identity codes on both endpoints. Totals 3l + 9*|edges|."""
    sites = topo.sites
    one = build_one_body_set(sites).operators
    two = []
    for i, j in topo.edges:
        for a in (1, 2, 3):
            for b in (1, 2, 3):
                codes = [0] * sites
                codes[i - 1] = a
                codes[j - 1] = b
                two.append(PauliString(tuple(codes)))
    two.sort(key=lambda s: s.index)
    return LindbladSet(sites, one + tuple(two), body_order=2, topology=topo)


@dataclass(frozen=True)
class KossakowskiMatrix:
    """Hermitian PSD coupling matrix between channels, Tr K = 2^l."""

    sites: int
    entries: np.ndarray
    seed: int | None = None
    spectrum: str = "uniform"

    @property
    def n_channels(self) -> int:
        return self.entries.shape[0]

    @property
    def mean_diagonal(self) -> float:
        return 2**self.sites / self.n_channels

    def validate(self, tol: float = 1e-12):
        k = self.entries
        scale = 2**self.sites
        if not np.allclose(k, k.conj().T, atol=tol * scale):
            raise ValueError("Kossakowski matrix is not Hermitian")
        if abs(np.trace(k).real - scale) > tol * scale:
            raise ValueError(f"trace {np.trace(k)} != {scale}")
        evals = np.linalg.eigvalsh(k)
        if evals.min() < -tol * scale:
            raise ValueError(f"negative eigenvalue {evals.min()}")


def haar_unitary(dim: int, rng: np.random.Generator) -> np.ndarray:
    """CUE sample via QR of a complex Ginibre matrix with R-phase correction."""
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    q, r = np.linalg.qr(g / np.sqrt(2.0))
    d = np.diagonal(r)
    return q * (d / np.abs(d))


def sample_kossakowski(
    n_channels: int,
    sites: int,
    seed: int | None = None,
    spectrum: str = "uniform",
) -> KossakowskiMatrix:
    """K = U^dag D U with Haar U and nonnegative spectrum D, rescaled so
    Tr K = 2^l exactly.

    Spectrum kinds: "uniform" (iid U[0,1] eigenvalues), "exponential"
    (iid Exp(1)), and "degenerate" (all equal, which collapses K to d*I
    exactly since U cancels).
    """
    if n_channels < 1:
        raise ValueError("need at least one channel")
    if spectrum not in SPECTRUM_KINDS:
        raise ValueError(f"unknown spectrum spec {spectrum!r}; choose {SPECTRUM_KINDS}")
    norm = float(2**sites)
    if spectrum == "degenerate":
        k = (norm / n_channels) * np.eye(n_channels, dtype=complex)
        return KossakowskiMatrix(sites, k, seed=seed, spectrum=spectrum)
    rng = np.random.default_rng(seed)
    if spectrum == "uniform":
        d = rng.uniform(0.0, 1.0, size=n_channels)
    else:
        d = rng.exponential(1.0, size=n_channels)
    total = d.sum()
    if total <= 0.0:
        raise ValueError("degenerate zero spectrum draw")
    d *= norm / total
    u = haar_unitary(n_channels, rng)
    k = u.conj().T @ (d[:, None] * u)
    k = 0.5 * (k + k.conj().T)
    # rounding in the congruence can move the trace by a few ulp
    k *= norm / np.trace(k).real
    return KossakowskiMatrix(sites, k, seed=seed, spectrum=spectrum)


@dataclass(frozen=True)
class LiouvillianMatrix:
    """Dense adjoint generator over the normalized Pauli basis."""

    sites: int
    matrix: np.ndarray
    meta: dict = field(default_factory=dict)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def _channel_masks(lset: LindbladSet) -> tuple[np.ndarray, np.ndarray]:
    xm = np.array([op.xmask for op in lset.operators], dtype=np.uint32)
    zm = np.array([op.zmask for op in lset.operators], dtype=np.uint32)
    return xm, zm


def _pair_action(sx, sz, lxm, lzm, lxn, lzn):
    """Phase factors of the three generator terms for one channel pair,
    over all input strings at once. Returns (coef, wx, wz) with the output
    string y = (sx xor wx, sz xor wz) and contribution coef * K[n, m]."""
    g1 = pauli.phase_exponents(lxm, lzm, sx, sz)
    g1 = g1 + pauli.phase_exponents(sx ^ lxm, sz ^ lzm, lxn, lzn)
    wx = lxm ^ lxn
    wz = lzm ^ lzn
    gmn = pauli.phase_exponent(int(lxm), int(lzm), int(lxn), int(lzn))
    g2 = gmn + pauli.phase_exponents(wx, wz, sx, sz)
    g3 = gmn + pauli.phase_exponents(sx, sz, wx, wz)
    coef = (
        pauli.phase_values(g1 % 4)
        - 0.5 * pauli.phase_values(g2 % 4)
        - 0.5 * pauli.phase_values(g3 % 4)
    )
    return coef, wx, wz


def build_adjoint_superoperator(
    lset: LindbladSet, kmat: KossakowskiMatrix
) -> LiouvillianMatrix:
    """Assemble the dense 4^l x 4^l adjoint generator.

    Cost is O(N^2 4^l) phase evaluations over the channel pairs with
    nonzero coupling; diagonal K (the d*I starting point) therefore
    assembles in O(N 4^l).
    """
    if kmat.n_channels != lset.count:
        raise ValueError(
            f"Kossakowski dimension {kmat.n_channels} != channel count {lset.count}"
        )
    sites = lset.sites
    if sites > MAX_DENSE_SITES:
        raise ValueError(
            f"dense storage capped at {MAX_DENSE_SITES} sites; use apply_adjoint"
        )
    dim = 4**sites
    sx, sz = pauli.all_masks(sites)
    idx_of = pauli.index_of_masks(sites)
    lxm, lzm = _channel_masks(lset)
    k = kmat.entries
    cols = np.arange(dim)
    mat = np.zeros((dim, dim), dtype=complex)
    for n in range(lset.count):
        for m in range(lset.count):
            knm = k[n, m]
            if knm == 0.0:
                continue
            coef, wx, wz = _pair_action(sx, sz, lxm[m], lzm[m], lxm[n], lzm[n])
            rows = idx_of[sx ^ wx, sz ^ wz]
            mat[rows, cols] += knm * coef
    return LiouvillianMatrix(
        sites,
        mat,
        meta={
            "n_channels": lset.count,
            "body_order": lset.body_order,
            "topology": str(lset.topology) if lset.topology else None,
            "seed": kmat.seed,
            "spectrum": kmat.spectrum,
        },
    )


def apply_adjoint(
    lset: LindbladSet, kmat: KossakowskiMatrix, coeffs: np.ndarray
) -> np.ndarray:
    """Matrix-free action of the adjoint generator on a coefficient vector.

    Matches LiouvillianMatrix @ coeffs where the dense form exists, but
    needs only O(4^l) memory, so it serves sizes past the dense cap.
    """
    if kmat.n_channels != lset.count:
        raise ValueError(
            f"Kossakowski dimension {kmat.n_channels} != channel count {lset.count}"
        )
    sites = lset.sites
    dim = 4**sites
    coeffs = np.asarray(coeffs, dtype=complex)
    if coeffs.shape != (dim,):
        raise ValueError(f"expected coefficient vector of length {dim}")
    sx, sz = pauli.all_masks(sites)
    idx_of = pauli.index_of_masks(sites)
    lxm, lzm = _channel_masks(lset)
    k = kmat.entries
    out = np.zeros(dim, dtype=complex)
    for n in range(lset.count):
        for m in range(lset.count):
            knm = k[n, m]
            if knm == 0.0:
                continue
            coef, wx, wz = _pair_action(sx, sz, lxm[m], lzm[m], lxm[n], lzm[n])
            rows = idx_of[sx ^ wx, sz ^ wz]
            out[rows] += (knm * coef) * coeffs
    return out


# ---------------------------------------------------------------------------
# Columnar text serialization (row, col, re, im) with a key=value header.
# ---------------------------------------------------------------------------


def write_matrix(path, matrix: np.ndarray, header: dict):
    """Write nonzero entries as "row col re im" lines under '# key=value' headers."""
    with open(path, "w") as fh:
        for key, value in header.items():
            fh.write(f"# {key}={value}\n")
        fh.write(f"# shape={matrix.shape[0]}x{matrix.shape[1]}\n")
        fh.write("# columns: row col re im\n")
        rows, cols = np.nonzero(matrix)
        for r, c in zip(rows, cols):
            v = matrix[r, c]
            fh.write(f"{r} {c} {v.real!r} {v.imag!r}\n")


def read_matrix(path) -> tuple[np.ndarray, dict]:
    """Inverse of write_matrix."""
    header: dict = {}
    shape = None
    entries = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                body = line[1:].strip()
                if "=" in body:
                    key, _, value = body.partition("=")
                    header[key.strip()] = value.strip()
                continue
            r, c, re, im = line.split()
            entries.append((int(r), int(c), float(re), float(im)))
    if "shape" not in header:
        raise ValueError(f"missing shape header in {path}")
    nrows, ncols = (int(v) for v in header["shape"].split("x"))
    mat = np.zeros((nrows, ncols), dtype=complex)
    for r, c, re, im in entries:
        mat[r, c] = re + 1j * im
    return mat, header
