"""Two particles on a chain == one particle on a square lattice, certified.

Two opposite-spin electrons on the tilted 1/i chain live on a full square
lattice in the pair coordinates (x, y); spinless-fermion pairs live on its
strict lower triangle and boson pairs on the closed triangle with sqrt(2)
couplings where a bond touches the double-occupation diagonal.  Everything
is certified against an oracle that applies the second-quantized chain
Hamiltonian to each pair state: exchange signs and sqrt(2) factors come
out of the operator algebra, not from transcribed couplings.
"""

import numpy as np

from starkladder import (
    LatticeKind,
    LatticeSpec,
    build_pair_lattice,
    oracle_pair_hamiltonian,
    pt_commutator_deviation,
    sector_decompose,
    spectrum_multiset_distance,
)

omega = 0.2
for side in (4, 6, 8):
    print(f"side {side}:")
    for kind in (
        LatticeKind.PAIR_2D_ELECTRON,
        LatticeKind.PAIR_2D_FERMION,
        LatticeKind.PAIR_2D_BOSON,
    ):
        built = build_pair_lattice(LatticeSpec(kind=kind, n_sites=side, omega=omega))
        oracle = oracle_pair_hamiltonian(kind, side, omega)
        dev = np.abs(built.entries - oracle.entries).max()
        print(f"  {kind.value:18s} dim {built.dim:3d}  |built - oracle| = {dev:.2e}")

side = 8
electron = build_pair_lattice(
    LatticeSpec(kind=LatticeKind.PAIR_2D_ELECTRON, n_sites=side, omega=omega)
)
print(f"\nparity-conjugation commutator on the electron lattice: "
      f"{pt_commutator_deviation(electron):.2e}")

# The electron lattice is reflection symmetric about x = y, so it splits
# into a symmetric and an antisymmetric sector; those sectors ARE the boson
# and fermion lattices, and their spectra tile the electron spectrum.
h_sym, h_anti = sector_decompose(electron)
boson = build_pair_lattice(
    LatticeSpec(kind=LatticeKind.PAIR_2D_BOSON, n_sites=side, omega=omega)
)
fermion = build_pair_lattice(
    LatticeSpec(kind=LatticeKind.PAIR_2D_FERMION, n_sites=side, omega=omega)
)
print(f"symmetric sector vs boson lattice:      "
      f"{np.abs(h_sym.entries - boson.entries).max():.2e}")
print(f"antisymmetric sector vs fermion lattice: "
      f"{np.abs(h_anti.entries - fermion.entries).max():.2e}")

merged = np.concatenate(
    [np.linalg.eigvals(h_sym.entries), np.linalg.eigvals(h_anti.entries)]
)
dev = spectrum_multiset_distance(np.linalg.eigvals(electron.entries), merged)
print(f"electron spectrum vs merged sector spectra: {dev:.2e}")
print(f"dimensions: {side * side} = {h_sym.dim} + {h_anti.dim}")

# Where the sqrt(2) couplings sit: bonds with exactly one endpoint on the
# double-occupation diagonal.
mags = np.abs(boson.entries)
ii, jj = np.nonzero(np.abs(mags - np.sqrt(2.0)) < 1e-12)
edges = {
    tuple(sorted((boson.basis_labels[a], boson.basis_labels[b])))
    for a, b in zip(ii, jj)
}
print(f"\nsqrt(2)-scaled bonds at side {side} ({len(edges)} of them):")
for a, b in sorted(edges):
    print(f"  {a} <-> {b}")
