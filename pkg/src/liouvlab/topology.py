"""Qubit connectivity graphs constraining two-body channels and CNOT placement."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class Topology:
    """Undirected graph on 1-indexed sites, stored as sorted (i, j) pairs with i < j."""

    sites: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.sites < 1:
            raise ValueError(f"topology needs at least one site, got {self.sites}")
        seen = set()
        for i, j in self.edges:
            if i == j:
                raise ValueError(f"self-loop on site {i}")
            if not (1 <= i <= self.sites and 1 <= j <= self.sites):
                raise ValueError(f"edge ({i},{j}) out of range for {self.sites} sites")
            if i > j:
                raise ValueError(f"edge ({i},{j}) not in canonical (low, high) order")
            if (i, j) in seen:
                raise ValueError(f"duplicate edge ({i},{j})")
            seen.add((i, j))

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def degrees(self) -> dict[int, int]:
        deg = {i: 0 for i in range(1, self.sites + 1)}
        for i, j in self.edges:
            deg[i] += 1
            deg[j] += 1
        return deg

    def edge_sites(self) -> frozenset[int]:
        """Sites of minimal degree (the endpoints of an open chain).

        On a degree-regular graph every site qualifies, which makes the
        derived classifications constant within each operator order.
        """
        deg = self.degrees()
        dmin = min(deg.values())
        return frozenset(i for i, d in deg.items() if d == dmin)

    def is_chain_like(self) -> bool:
        """True when no site has more than two neighbors (path or ring)."""
        return max(self.degrees().values()) <= 2

    def __str__(self) -> str:
        if self == chain(self.sites):
            return f"chain:{self.sites}"
        if self == complete(self.sites):
            return f"complete:{self.sites}"
        pairs = ",".join(f"{i}-{j}" for i, j in self.edges)
        return f"custom:{self.sites}:{pairs}"


def chain(n_sites: int) -> Topology:
    """Open 1-D chain with edges (i, i+1)."""
    if n_sites < 2:
        raise ValueError(f"chain needs at least 2 sites, got {n_sites}")
    return Topology(n_sites, tuple((i, i + 1) for i in range(1, n_sites)))


def complete(n_sites: int) -> Topology:
    """Fully connected graph on n_sites."""
    if n_sites < 2:
        raise ValueError(f"complete graph needs at least 2 sites, got {n_sites}")
    edges = tuple((i, j) for i in range(1, n_sites) for j in range(i + 1, n_sites + 1))
    return Topology(n_sites, edges)


def custom(n_sites: int, edges) -> Topology:
    """Arbitrary edge list; pairs may be given in either orientation."""
    canon = tuple(sorted((min(i, j), max(i, j)) for i, j in edges))
    return Topology(n_sites, canon)


def parse_topology(text: str) -> Topology:
    """Parse "chain:5", "complete:4", or "custom:5:1-2,2-3,..." forms."""
    parts = text.strip().split(":")
    kind = parts[0].lower()
    try:
        if kind == "chain" and len(parts) == 2:
            return chain(int(parts[1]))
        if kind == "complete" and len(parts) == 2:
            return complete(int(parts[1]))
        if kind == "custom" and len(parts) == 3:
            n = int(parts[1])
            edges = []
            for token in parts[2].split(","):
                a, b = token.split("-")
                edges.append((int(a), int(b)))
            return custom(n, edges)
    except ValueError:
        raise
    except Exception as exc:
        raise ValueError(f"malformed topology spec {text!r}") from exc
    raise ValueError(f"unrecognized topology spec {text!r}")
