"""Closed-form predictions for the dissipative timescale hierarchy.

For diagonal channel coupling K = d*I the adjoint generator is diagonal in
the Pauli-string basis, and every diagonal entry is -2d times the number
of channels anticommuting with the string. Counting those channels by the
string's structural features (order k, adjacent non-identity pairs p,
non-identities on chain endpoints e) gives the cluster and subcluster
centers, the quadratic rate profile in k, and the turnback order beyond
which more complex observables decay slower.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import pauli
from .liouvillian import LindbladSet
from .pauli import PauliString, StringFeatures
from .topology import Topology


@dataclass(frozen=True)
class HierarchyParams:
    """Relative strengths of two-body (alpha) and one-body (beta) dissipation."""

    alpha: float
    beta: float
    sites: int

    def __post_init__(self):
        if self.alpha < 0 or self.beta < 0:
            raise ValueError("strengths must be nonnegative")
        if self.alpha == 0 and self.beta == 0:
            raise ValueError("alpha and beta cannot both vanish")


def count_anticommuting(s: PauliString, lset: LindbladSet) -> int:
    """Number of channels in the set anticommuting with the string."""
    if s.length != lset.sites:
        raise ValueError(f"string length {s.length} != set size {lset.sites}")
    return sum(0 if pauli.commutes(s, op) else 1 for op in lset.operators)


def diagonal_element(s: PauliString, lset: LindbladSet, d: float) -> float:
    """Generator diagonal Tr(S L_adj[S]) for coupling K = d*I."""
    return -2.0 * d * count_anticommuting(s, lset)


def predicted_rate(k: int, params: HierarchyParams) -> float:
    """Inverse timescale 1/tau_k of order-k observables.

    The alpha term is normalized by the 9(l-1) two-body channels of an
    open chain and the beta term by the 3l one-body channels.
    """
    ell = params.sites
    if not 0 <= k <= ell:
        raise ValueError(f"order {k} out of range for {ell} sites")
    two = params.alpha / (9.0 * (ell - 1)) * (3.0 * ell * k - 2.0 * k**2 - k)
    one = params.beta / (3.0 * ell) * k
    return two + one


def turnback_k(params: HierarchyParams) -> float:
    """Real-valued order k* maximizing predicted_rate; needs alpha > 0."""
    if params.alpha <= 0:
        raise ValueError("no turnback for purely one-body dissipation (alpha = 0)")
    ell = params.sites
    return (3.0 * (ell - 1) * params.beta + ell * (3.0 * ell - 1) * params.alpha) / (
        4.0 * ell * params.alpha
    )


def subcluster_center(
    features: StringFeatures, topo: Topology, d1: float, d2: float
) -> float:
    """Diagonal entry shared by all chain strings with features (k, p, e).

    d1 and d2 are the mean Kossakowski diagonals on the one-body and
    two-body channels; the single-d model uses d1 = d2 = d. Per string:
    2k one-body channels anticommute, every edge covered on exactly one
    endpoint contributes 6 anticommuting pair channels and every doubly
    covered edge contributes 4, with (2k - e - 2p) singly covered edges
    on an open chain.
    """
    if not topo.is_chain_like():
        raise ValueError("subcluster centers are defined for chain-like topologies")
    k, p, e = features.order, features.adjacent_pairs, features.edge_nonidentities
    if k == 0:
        return 0.0
    singly = 2 * k - e - 2 * p
    if singly < 0:
        raise ValueError(f"inconsistent features {features} for {topo}")
    return -2.0 * (d1 * 2 * k + d2 * (6.0 * singly + 4.0 * p))


@dataclass(frozen=True)
class ClusterEntry:
    count: int
    center: float


def cluster_table(
    sites: int,
    topo: Topology,
    d1: float | None = None,
    d2: float | None = None,
) -> dict[tuple[int, int, int], ClusterEntry]:
    """Exhaustive (k, p, e) classification of all 4^l strings.

    The center of each class is the exact generator diagonal at coupling
    K = d*I on the two-body set of the topology, computed by channel
    counting per string and averaged within the class (classes are exactly
    degenerate on chains and complete graphs). Defaults take
    d1 = d2 = 2^l / N for the topology's two-body channel count N.
    """
    if not 1 <= sites <= pauli.MAX_SITES:
        raise ValueError(f"supported sizes are 1..{pauli.MAX_SITES}, got {sites}")
    if topo.sites != sites:
        raise ValueError(f"topology has {topo.sites} sites, expected {sites}")
    n_channels = 3 * sites + 9 * topo.n_edges
    d = 2**sites / n_channels
    if d1 is None:
        d1 = d
    if d2 is None:
        d2 = d

    orders = pauli.orders_table(sites)
    edge_sites = topo.edge_sites()
    esmask = 0
    for site in edge_sites:
        esmask |= 1 << (sites - site)
    xm, zm = pauli.all_masks(sites)
    supp = (xm | zm).astype(np.uint32)
    evec = np.bitwise_count(supp & np.uint32(esmask)).astype(np.int64)
    pvec = np.zeros(4**sites, dtype=np.int64)
    degsum = np.zeros(4**sites, dtype=np.int64)
    for i, j in topo.edges:
        bi = np.uint32(1 << (sites - i))
        bj = np.uint32(1 << (sites - j))
        on_i = (supp & bi) != 0
        on_j = (supp & bj) != 0
        pvec += (on_i & on_j).astype(np.int64)
        degsum += on_i.astype(np.int64) + on_j.astype(np.int64)
    # anticommuting channels: 2k one-body, 6 per singly covered edge, 4 per pair
    singly = degsum - 2 * pvec
    diag = -2.0 * (d1 * 2.0 * orders + d2 * (6.0 * singly + 4.0 * pvec))

    table: dict[tuple[int, int, int], list] = {}
    for idx in range(4**sites):
        key = (int(orders[idx]), int(pvec[idx]), int(evec[idx]))
        table.setdefault(key, []).append(diag[idx])
    return {
        key: ClusterEntry(count=len(vals), center=float(np.mean(vals)))
        for key, vals in sorted(table.items())
    }


def write_cluster_table(path, table: dict[tuple[int, int, int], ClusterEntry]):
    """Text export: one "k p e count center" record per class."""
    with open(path, "w") as fh:
        fh.write("# columns: k p e count center\n")
        for (k, p, e), entry in table.items():
            fh.write(f"{k} {p} {e} {entry.count} {entry.center!r}\n")
