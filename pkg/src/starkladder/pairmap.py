"""Two-particle chain problems as 2D single-particle lattices.

The hand-built 2D lattices (:func:`starkladder.lattices.build_pair_lattice`)
are certified here against an independent oracle that applies the
second-quantized two-particle Hamiltonian to each pair basis state and
re-expands.  Fermionic exchange signs and the bosonic sqrt(2) factors on
double occupation come out of the operator algebra, never from the
transcribed lattice couplings.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import evolve
from .lattices import (
    LatticeKind,
    LatticeSpec,
    OperatorMatrix,
    build_pair_lattice,
    pair_labels,
)

__all__ = [
    "PairBasis",
    "SectorProjector",
    "PairEquivalenceReport",
    "pair_basis",
    "oracle_pair_hamiltonian",
    "sector_projector",
    "sector_decompose",
    "reflection_swap_matrix",
    "lift_1d_evolution",
    "sector_reassembled_distance",
]


@dataclass(frozen=True)
class PairBasis:
    """Ordered two-particle basis on a side-``L`` chain.

    ``diagonal_weight`` records the 1/sqrt(2) bookkeeping of doubly
    occupied boson states; it is 1 everywhere else and never enters the
    amplitudes twice.
    """

    kind: LatticeKind
    side: int
    labels: tuple
    diagonal_weight: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.labels)

    def label_index(self) -> dict:
        return {lab: i for i, lab in enumerate(self.labels)}


def pair_basis(kind: LatticeKind, side: int) -> PairBasis:
    """Lexicographic pair basis for the given statistics."""
    kind = LatticeKind(kind)
    labels = pair_labels(kind, side)
    weight = np.array(
        [1.0 / math.sqrt(2.0) if (x == y and kind is LatticeKind.PAIR_2D_BOSON) else 1.0
         for x, y in labels]
    )
    return PairBasis(kind=kind, side=side, labels=labels, diagonal_weight=weight)


def _bond_amp(b: int) -> complex:
    """1/i dimer hopping on bond (b, b+1), indexed by the lower site."""
    return 1.0 + 0j if b % 2 == 0 else 1j


def _chain_hops(side: int):
    """Directed nearest-neighbor hops (q -> p) with their amplitudes."""
    for b in range(side - 1):
        amp = _bond_amp(b)
        yield b + 1, b, amp  # p, q: destroy at b, create at b + 1
        yield b, b + 1, amp


def oracle_pair_hamiltonian(
    kind: LatticeKind, side: int, omega: float, origin_offset: int | None = None
) -> OperatorMatrix:
    """Two-particle Hamiltonian built from operator algebra.

    Applies the 1/i-dimer chain Hamiltonian, in second quantization, to
    every pair basis state: distinguishable species for the electron
    basis, anticommuting operators (descending-order convention ``x > y``)
    for fermions, and occupation-number normalization
    ``(b^dag)^n / sqrt(n!)`` for bosons.
    """
    kind = LatticeKind(kind)
    if side < 4:
        raise ValueError("pair lattices need side >= 4")
    offset = side // 2 if origin_offset is None else int(origin_offset)
    basis = pair_basis(kind, side)
    index = basis.label_index()
    dim = basis.dim
    h = np.zeros((dim, dim), dtype=complex)

    for col, (x, y) in enumerate(basis.labels):
        h[col, col] = omega * ((x - offset) + (y - offset))
        if kind is LatticeKind.PAIR_2D_ELECTRON:
            # species are distinguishable: hop each coordinate independently
            for p, q, amp in _chain_hops(side):
                if q == x:
                    h[index[(p, y)], col] += amp
                if q == y:
                    h[index[(x, p)], col] += amp
        elif kind is LatticeKind.PAIR_2D_FERMION:
            # state is f+_x f+_y |0>, x > y; f_q picks up a sign crossing f+_x
            for p, q, amp in _chain_hops(side):
                terms = []
                if q == x:
                    terms.append(((p, y), +1.0))
                if q == y:
                    terms.append(((p, x), -1.0))
                for (a, b), sign in terms:
                    if a == b:
                        continue  # Pauli exclusion: (f+_a)^2 = 0
                    if a < b:
                        a, b, sign = b, a, -sign
                    h[index[(a, b)], col] += amp * sign
        else:
            # bosons: coefficient sqrt(n_q) * sqrt(n_p + 1) from b+_p b_q
            occ = {x: 2} if x == y else {x: 1, y: 1}
            for p, q, amp in _chain_hops(side):
                n_q = occ.get(q, 0)
                if n_q == 0:
                    continue
                coeff = math.sqrt(n_q) * math.sqrt(occ.get(p, 0) + 1)
                new_occ = dict(occ)
                new_occ[q] = n_q - 1
                if new_occ[q] == 0:
                    del new_occ[q]
                new_occ[p] = new_occ.get(p, 0) + 1
                sites = sorted(new_occ)
                label = (
                    (sites[0], sites[0]) if len(sites) == 1 else (sites[1], sites[0])
                )
                h[index[label], col] += amp * coeff
    return OperatorMatrix(h, basis.labels)


@dataclass(frozen=True)
class SectorProjector:
    """Orthonormal rows mapping the electron basis onto one swap sector."""

    swap_parity: int  # +1 symmetric (boson order), -1 antisymmetric (fermion order)
    matrix: np.ndarray
    labels: tuple


def sector_projector(side: int, swap_parity: int) -> SectorProjector:
    if swap_parity not in (+1, -1):
        raise ValueError("swap_parity must be +1 or -1")
    kind = (
        LatticeKind.PAIR_2D_BOSON if swap_parity == +1 else LatticeKind.PAIR_2D_FERMION
    )
    labels = pair_labels(kind, side)
    mat = np.zeros((len(labels), side * side))
    root2 = math.sqrt(2.0)
    for row, (x, y) in enumerate(labels):
        if x == y:
            mat[row, x * side + y] = 1.0
        else:
            mat[row, x * side + y] = 1.0 / root2
            mat[row, y * side + x] = swap_parity / root2
    return SectorProjector(swap_parity=swap_parity, matrix=mat, labels=labels)


def reflection_swap_matrix(side: int) -> np.ndarray:
    """Permutation exchanging the two coordinates, (x, y) -> (y, x)."""
    s = np.zeros((side * side, side * side))
    for x in range(side):
        for y in range(side):
            s[y * side + x, x * side + y] = 1.0
    return s


def sector_decompose(
    h_electron: OperatorMatrix, symmetry_tol: float = 1e-12
) -> tuple[OperatorMatrix, OperatorMatrix]:
    """Split the electron lattice into (symmetric, antisymmetric) sectors.

    Refuses (raising ``ValueError``) if the matrix is not reflection
    symmetric about ``x == y``, which would indicate a builder bug rather
    than a property of the model.
    """
    dim = h_electron.dim
    side = round(math.sqrt(dim))
    if side * side != dim:
        raise ValueError("sector_decompose needs a full square-lattice matrix")
    swap = reflection_swap_matrix(side)
    asym = float(np.linalg.norm(h_electron.entries - swap @ h_electron.entries @ swap))
    if asym > symmetry_tol * max(1.0, float(np.abs(h_electron.entries).max())):
        raise ValueError(
            f"electron lattice is not reflection symmetric (deviation {asym:.3e}); "
            "refusing to decompose"
        )
    out = []
    for parity in (+1, -1):
        proj = sector_projector(side, parity)
        sector = proj.matrix @ h_electron.entries @ proj.matrix.T
        out.append(OperatorMatrix(sector, proj.labels))
    return out[0], out[1]


@dataclass(frozen=True)
class PairEquivalenceReport:
    """Deviations between the hand-built lattice and the oracle."""

    kind: str
    side: int
    omega: float
    matrix_deviation: float
    max_state_distance: float
    times: tuple
    distances: tuple

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "side": self.side,
            "omega": self.omega,
            "matrix_deviation": self.matrix_deviation,
            "max_state_distance": self.max_state_distance,
            "times": list(self.times),
            "distances": list(self.distances),
        }


def _normalized_distance(a: np.ndarray, b: np.ndarray) -> float:
    return float(
        np.linalg.norm(a / np.linalg.norm(a) - b / np.linalg.norm(b))
    )


def lift_1d_evolution(
    psi0: np.ndarray,
    kind: LatticeKind,
    side: int,
    omega: float,
    times,
) -> PairEquivalenceReport:
    """Evolve one pair state under the 2D lattice and under the oracle.

    The two matrices are supposed to be equal, so this certifies basis
    ordering and plumbing end to end; the report carries the normalized
    state distance at every sampled time.
    """
    kind = LatticeKind(kind)
    spec = LatticeSpec(kind=kind, n_sites=side, omega=omega)
    built = build_pair_lattice(spec)
    oracle = oracle_pair_hamiltonian(kind, side, omega)
    if built.basis_labels != oracle.basis_labels:
        raise ValueError("basis ordering mismatch between builder and oracle")
    series_a = evolve(built, psi0, times)
    series_b = evolve(oracle, psi0, times)
    distances = tuple(
        _normalized_distance(sa, sb)
        for sa, sb in zip(series_a.states, series_b.states)
    )
    return PairEquivalenceReport(
        kind=kind.value,
        side=side,
        omega=omega,
        matrix_deviation=float(np.abs(built.entries - oracle.entries).max()),
        max_state_distance=max(distances),
        times=tuple(float(t) for t in series_a.times),
        distances=distances,
    )


def sector_reassembled_distance(
    h_electron: OperatorMatrix, psi0: np.ndarray, times
) -> float:
    """Full-lattice evolution versus sector-wise evolution, reassembled.

    Projects the initial state onto both swap sectors, evolves each under
    its sector matrix, lifts back with the projector transposes, and
    returns the maximum normalized distance to the direct evolution.
    """
    dim = h_electron.dim
    side = round(math.sqrt(dim))
    h_sym, h_anti = sector_decompose(h_electron)
    p_sym = sector_projector(side, +1)
    p_anti = sector_projector(side, -1)
    direct = evolve(h_electron, psi0, times)
    parts = []
    for proj, sector in ((p_sym, h_sym), (p_anti, h_anti)):
        comp = proj.matrix @ np.asarray(psi0, dtype=complex)
        series = evolve(sector, comp, times) if np.linalg.norm(comp) > 0 else None
        parts.append((proj, series))
    worst = 0.0
    for k in range(direct.times.size):
        rebuilt = np.zeros(dim, dtype=complex)
        for proj, series in parts:
            if series is not None:
                rebuilt += proj.matrix.T @ series.states[k]
        worst = max(worst, _normalized_distance(direct.states[k], rebuilt))
    return worst
