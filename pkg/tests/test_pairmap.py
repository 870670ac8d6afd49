import numpy as np
import pytest

from starkladder.dynamics import evolve
from starkladder.lattices import (
    LatticeKind,
    LatticeSpec,
    OperatorMatrix,
    build_pair_lattice,
)
from starkladder.pairmap import (
    lift_1d_evolution,
    oracle_pair_hamiltonian,
    pair_basis,
    reflection_swap_matrix,
    sector_decompose,
    sector_projector,
    sector_reassembled_distance,
)
from starkladder.spectra import spectrum_multiset_distance

OMEGA = 0.2
KINDS = (
    LatticeKind.PAIR_2D_ELECTRON,
    LatticeKind.PAIR_2D_FERMION,
    LatticeKind.PAIR_2D_BOSON,
)


def _electron(side, omega=OMEGA):
    return build_pair_lattice(
        LatticeSpec(kind=LatticeKind.PAIR_2D_ELECTRON, n_sites=side, omega=omega)
    )


# ---------------------------------------------------------------------------
# bases
# ---------------------------------------------------------------------------


def test_basis_regions_and_sizes():
    for side in (4, 7):
        assert pair_basis(LatticeKind.PAIR_2D_ELECTRON, side).dim == side**2
        fermion = pair_basis(LatticeKind.PAIR_2D_FERMION, side)
        boson = pair_basis(LatticeKind.PAIR_2D_BOSON, side)
        assert fermion.dim == side * (side - 1) // 2
        assert boson.dim == side * (side + 1) // 2
        assert all(x > y for x, y in fermion.labels)
        assert all(x >= y for x, y in boson.labels)


def test_boson_diagonal_weight_bookkeeping():
    basis = pair_basis(LatticeKind.PAIR_2D_BOSON, 5)
    for (x, y), w in zip(basis.labels, basis.diagonal_weight):
        assert w == pytest.approx(1 / np.sqrt(2) if x == y else 1.0)
    electron = pair_basis(LatticeKind.PAIR_2D_ELECTRON, 5)
    assert np.all(electron.diagonal_weight == 1.0)


# ---------------------------------------------------------------------------
# oracle
# ---------------------------------------------------------------------------


def test_oracle_electron_diagonal_is_summed_potential():
    h = oracle_pair_hamiltonian(LatticeKind.PAIR_2D_ELECTRON, 6, OMEGA, origin_offset=0)
    idx = {lab: i for i, lab in enumerate(h.basis_labels)}
    for x, y in h.basis_labels:
        assert h.entries[idx[(x, y)], idx[(x, y)]] == pytest.approx(OMEGA * (x + y))


def test_oracle_boson_sqrt2_from_double_occupation():
    h = oracle_pair_hamiltonian(LatticeKind.PAIR_2D_BOSON, 8, 0.0)
    idx = {lab: i for i, lab in enumerate(h.basis_labels)}
    for y in (1, 2):
        assert h.entries[idx[(2 * y + 1, 2 * y)], idx[(2 * y, 2 * y)]] == pytest.approx(
            np.sqrt(2.0)
        )


def test_oracle_fermion_matches_antisymmetric_projection():
    side = 4
    electron = oracle_pair_hamiltonian(LatticeKind.PAIR_2D_ELECTRON, side, 0.0)
    fermion = oracle_pair_hamiltonian(LatticeKind.PAIR_2D_FERMION, side, 0.0)
    assert fermion.dim == 6
    proj = sector_projector(side, -1)
    projected = proj.matrix @ electron.entries @ proj.matrix.T
    np.testing.assert_allclose(fermion.entries, projected, atol=1e-12)


@pytest.mark.parametrize("side", [4, 6, 8])
@pytest.mark.parametrize("kind", KINDS)
def test_builder_equals_oracle_entrywise(side, kind):
    built = build_pair_lattice(LatticeSpec(kind=kind, n_sites=side, omega=OMEGA))
    oracle = oracle_pair_hamiltonian(kind, side, OMEGA)
    assert built.basis_labels == oracle.basis_labels
    assert np.abs(built.entries - oracle.entries).max() < 1e-12


def test_oracle_rejects_small_side():
    with pytest.raises(ValueError):
        oracle_pair_hamiltonian(LatticeKind.PAIR_2D_BOSON, 3, OMEGA)


# ---------------------------------------------------------------------------
# sector decomposition
# ---------------------------------------------------------------------------


def test_projector_rows_are_orthonormal():
    for parity in (+1, -1):
        proj = sector_projector(6, parity)
        gram = proj.matrix @ proj.matrix.T
        np.testing.assert_allclose(gram, np.eye(proj.matrix.shape[0]), atol=1e-14)


def test_sector_dimensions_partition_the_square():
    side = 7
    sym = sector_projector(side, +1).matrix.shape[0]
    anti = sector_projector(side, -1).matrix.shape[0]
    assert sym == side * (side + 1) // 2
    assert anti == side * (side - 1) // 2
    assert sym + anti == side**2


def test_electron_lattice_is_reflection_symmetric():
    h = _electron(8)
    swap = reflection_swap_matrix(8)
    assert np.linalg.norm(h.entries - swap @ h.entries @ swap) == 0.0


def test_sectors_match_hand_built_lattices():
    side = 8
    h_sym, h_anti = sector_decompose(_electron(side))
    boson = build_pair_lattice(
        LatticeSpec(kind=LatticeKind.PAIR_2D_BOSON, n_sites=side, omega=OMEGA)
    )
    fermion = build_pair_lattice(
        LatticeSpec(kind=LatticeKind.PAIR_2D_FERMION, n_sites=side, omega=OMEGA)
    )
    assert np.abs(h_sym.entries - boson.entries).max() < 1e-12
    assert np.abs(h_anti.entries - fermion.entries).max() < 1e-12
    assert h_sym.basis_labels == boson.basis_labels
    assert h_anti.basis_labels == fermion.basis_labels


def test_electron_spectrum_closed_under_conjugation():
    # parity-conjugation symmetry forces conjugate-paired 2D levels
    from starkladder.spectra import conjugation_closure_deviation

    values = np.linalg.eigvals(_electron(8).entries)
    assert conjugation_closure_deviation(values) < 1e-9


def test_sector_spectra_merge_to_electron_spectrum():
    side = 8
    electron = _electron(side)
    h_sym, h_anti = sector_decompose(electron)
    merged = np.concatenate(
        [np.linalg.eigvals(h_sym.entries), np.linalg.eigvals(h_anti.entries)]
    )
    dev = spectrum_multiset_distance(np.linalg.eigvals(electron.entries), merged)
    assert dev < 1e-9


def test_decompose_refuses_asymmetric_matrix():
    h = _electron(6)
    entries = h.entries.copy()
    entries[1, 2] += 0.5  # break reflection symmetry
    broken = OperatorMatrix(entries, h.basis_labels)
    with pytest.raises(ValueError, match="reflection"):
        sector_decompose(broken)


def test_decompose_needs_square_lattice():
    fermion = build_pair_lattice(
        LatticeSpec(kind=LatticeKind.PAIR_2D_FERMION, n_sites=6, omega=OMEGA)
    )
    with pytest.raises(ValueError):
        sector_decompose(fermion)


# ---------------------------------------------------------------------------
# evolution equivalence
# ---------------------------------------------------------------------------


def test_lift_evolution_certifies_plumbing():
    side = 8
    rng = np.random.default_rng(0)
    psi0 = rng.normal(size=side**2) + 1j * rng.normal(size=side**2)
    psi0 /= np.linalg.norm(psi0)
    times = np.linspace(0.0, 4.0, 5)
    report = lift_1d_evolution(psi0, LatticeKind.PAIR_2D_ELECTRON, side, OMEGA, times)
    assert report.distances[0] == 0.0
    assert report.max_state_distance < 1e-8
    assert report.matrix_deviation < 1e-12
    payload = report.to_dict()
    assert payload["side"] == side and len(payload["distances"]) == 5


def test_sector_evolution_reassembles():
    side = 8
    rng = np.random.default_rng(1)
    psi0 = rng.normal(size=side**2) + 1j * rng.normal(size=side**2)
    psi0 /= np.linalg.norm(psi0)
    times = np.linspace(0.0, 4.0, 5)
    assert sector_reassembled_distance(_electron(side), psi0, times) < 1e-8


def test_pure_sector_state_stays_in_sector():
    side = 6
    electron = _electron(side)
    proj = sector_projector(side, -1)
    rng = np.random.default_rng(2)
    comp = rng.normal(size=proj.matrix.shape[0]) + 0j
    psi0 = proj.matrix.T @ (comp / np.linalg.norm(comp))
    series = evolve(electron, psi0, np.linspace(0.0, 5.0, 6))
    other = sector_projector(side, +1)
    for state in series.states:
        assert np.linalg.norm(other.matrix @ state) < 1e-9
