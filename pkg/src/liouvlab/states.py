"""Product-state specifications shared by the circuit simulator and the ED oracle."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .pauli import CODE_CHARS, orders_table

BASES = "xyz"
_BASIS_CODE = {"x": 1, "y": 2, "z": 3}


@dataclass(frozen=True)
class StateSpec:
    """Per-site local basis and quantum number, e.g. bases "xzy", quantum_numbers (0,1,0).

    Site i is the +1 (sigma=0) or -1 (sigma=1) eigenstate of the Pauli
    named by bases[i].
    """

    bases: str
    quantum_numbers: tuple[int, ...]

    def __post_init__(self):
        if len(self.bases) != len(self.quantum_numbers):
            raise ValueError("bases and quantum numbers differ in length")
        if any(b not in BASES for b in self.bases):
            raise ValueError(f"invalid bases {self.bases!r}")
        if any(s not in (0, 1) for s in self.quantum_numbers):
            raise ValueError(f"quantum numbers must be 0 or 1: {self.quantum_numbers}")

    @property
    def sites(self) -> int:
        return len(self.bases)

    def label(self) -> str:
        return "".join(f"{b}{s}" for b, s in zip(self.bases, self.quantum_numbers))

    def __str__(self) -> str:
        return self.label()

    @classmethod
    def from_label(cls, label: str) -> "StateSpec":
        """Parse compact form like "x0y1z0"."""
        if len(label) % 2 != 0:
            raise ValueError(f"malformed state spec {label!r}")
        bases = label[0::2]
        try:
            sigmas = tuple(int(c) for c in label[1::2])
        except ValueError:
            raise ValueError(f"malformed state spec {label!r}") from None
        return cls(bases, sigmas)

    @classmethod
    def all_z(cls, sites: int) -> "StateSpec":
        return cls("z" * sites, (0,) * sites)

    def single_site_expectations(self) -> np.ndarray:
        """Signs (+1/-1) of the per-site Pauli named by the local basis."""
        return np.array([1.0 - 2.0 * s for s in self.quantum_numbers])

    def pauli_vector(self) -> np.ndarray:
        """Tr(rho sigma_x) for every canonical string index (unnormalized Paulis).

        For a product state this factorizes: the trace is nonzero only for
        strings whose non-identity codes all match the local bases, where
        it equals the product of the single-site signs.
        """
        n = self.sites
        signs = self.single_site_expectations()
        vec = np.ones(1)
        for i in range(n):
            site = np.zeros(4)
            site[0] = 1.0
            site[_BASIS_CODE[self.bases[i]]] = signs[i]
            vec = np.kron(vec, site)
        return vec


def random_state_specs(sites: int, count: int, seed: int) -> list[StateSpec]:
    """Seeded draw of product states with uniform local bases and signs."""
    rng = np.random.default_rng(seed)
    specs = []
    for _ in range(count):
        bases = "".join(BASES[b] for b in rng.integers(0, 3, size=sites))
        sigmas = tuple(int(s) for s in rng.integers(0, 2, size=sites))
        specs.append(StateSpec(bases, sigmas))
    return specs
