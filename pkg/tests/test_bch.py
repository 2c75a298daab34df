import numpy as np
import pytest
import scipy.linalg

from permdyn.bch import (
    ORDERINGS,
    SIGMA_X,
    SIGMA_Y,
    SIGMA_Z,
    TranspositionSet,
    bch_series_truncated,
    bch_sweep_residual,
    commutator,
    phase_prefactor,
    swap_matrix,
    sweep,
    sweep_exponential,
    sweep_generator,
    sweep_product,
    transposition_exponential,
    transposition_matrix,
    verify_product_identity,
    verify_terminating_bch,
    verify_transposition_exponential,
)
from permdyn.cogwheel import max_abs, unitarity_residual
from permdyn.hamiltonian import update_matrix


def test_pauli_algebra():
    for s in (SIGMA_X, SIGMA_Y, SIGMA_Z):
        assert max_abs(s @ s - np.eye(2)) == 0
    # with the down-first basis the usual relation picks up no extra sign
    assert max_abs(SIGMA_X @ SIGMA_Y - 1j * SIGMA_Z) == 0


def test_two_site_exchange():
    P = transposition_matrix(1, 2, 2)
    expected = np.array([[1, 0, 0, 0], [0, 0, 1, 0], [0, 1, 0, 0], [0, 0, 0, 1]])
    assert max_abs(P - expected) <= 1e-15


@pytest.mark.parametrize("n_sites,i,j", [(3, 1, 2), (4, 2, 3), (4, 4, 1), (6, 1, 5), (6, 6, 3)])
def test_pauli_construction_is_the_swap(n_sites, i, j):
    P = transposition_matrix(i, j, n_sites)
    assert max_abs(P - swap_matrix(i, j, n_sites)) <= 1e-15
    assert max_abs(P @ P - np.eye(1 << n_sites)) <= 1e-15


def test_transpositions_do_not_commute():
    P12 = swap_matrix(1, 2, 3)
    P23 = swap_matrix(2, 3, 3)
    assert max_abs(commutator(P12, P23)) > 0.5
    # a, b, c on sites 1, 2, 3 -> c, a, b: site1=down, site2=up, site3=up
    start = 0b011  # sites 1, 2 up, site 3 down
    vec = np.zeros(8)
    vec[start] = 1
    out = P12 @ P23 @ vec
    assert out.argmax() == 0b110


def test_bad_pairs():
    with pytest.raises(ValueError):
        transposition_matrix(2, 2, 4)
    with pytest.raises(ValueError):
        transposition_matrix(1, 5, 4)
    with pytest.raises(ValueError):
        TranspositionSet(((1, 2), (2, 3)), "odd")
    with pytest.raises(ValueError):
        sweep(4, "middle")


@pytest.mark.parametrize("k", [0, 1, 2])
@pytest.mark.parametrize("n_sites,i,j", [(2, 1, 2), (4, 1, 2), (4, 2, 3), (6, 6, 1)])
def test_transposition_exponential(k, n_sites, i, j):
    assert verify_transposition_exponential(i, j, n_sites, k) <= 1e-12
    P = transposition_matrix(i, j, n_sites)
    theta = (2 * k + 0.5) * np.pi
    assert max_abs(transposition_exponential(P, theta) - scipy.linalg.expm(-1j * theta * P)) <= 1e-12


def test_transposition_exponential_fails_off_the_special_angles():
    # exp(-i pi P) = -1, so P - i exp(-i pi P) = P + i with entries of size sqrt(2)
    assert verify_transposition_exponential(1, 2, 4, theta=np.pi) == pytest.approx(np.sqrt(2))


def test_sweeps():
    assert sweep(6, "odd").pairs == ((1, 2), (3, 4), (5, 6))
    assert sweep(6, "even").pairs == ((2, 3), (4, 5), (1, 6))


@pytest.mark.parametrize("n_sites", [4, 6])
@pytest.mark.parametrize("parity", ["odd", "even"])
def test_sweep_factors(n_sites, parity):
    mats = [swap_matrix(i, j, n_sites) for i, j in sweep(n_sites, parity).pairs]
    for a in mats:
        for b in mats:
            assert max_abs(commutator(a, b)) == 0
    prod = sweep_product(n_sites, parity)
    assert unitarity_residual(prod) <= 1e-12
    assert max_abs(prod - sweep_exponential(n_sites, parity)) <= 1e-12
    G = sweep_generator(n_sites, parity)
    assert max_abs(G - G.conj().T) == 0


@pytest.mark.parametrize("S", range(1, 9))
def test_phase_prefactor(S):
    assert phase_prefactor(S) == pytest.approx(1)


@pytest.mark.parametrize("n_sites", [4, 6, 8])
def test_product_identity(n_sites):
    assert verify_product_identity(n_sites, "even-first") <= 1e-10


@pytest.mark.parametrize("n_sites", [6, 8])
def test_swapped_ordering_gives_the_inverse(n_sites):
    assert verify_product_identity(n_sites, "odd-first") == pytest.approx(1.0)
    first, second = ORDERINGS["odd-first"]
    S = n_sites // 2
    lhs = (1j ** (2 * S)) * sweep_exponential(n_sites, first) @ sweep_exponential(n_sites, second)
    assert max_abs(lhs - update_matrix(n_sites, steps=-1)) <= 1e-10


def test_product_identity_rejects_unknown_ordering():
    with pytest.raises(ValueError):
        verify_product_identity(4, "backwards")


@pytest.mark.parametrize("n_sites", [4, 6, 8, 10])
def test_terminating_bch_dense(n_sites):
    assert verify_terminating_bch(n_sites, T=1.3) <= 1e-10


@pytest.mark.parametrize("n_sites", [8, 64, 1000])
def test_terminating_bch_on_orbits(n_sites):
    assert verify_terminating_bch(n_sites, mode="orbit", samples=50, seed=1) <= 1e-10


def test_terminating_bch_bad_mode():
    with pytest.raises(ValueError):
        verify_terminating_bch(4, mode="sparse")


def test_series_truncation_simple_cases():
    rng = np.random.default_rng(0)
    A = rng.standard_normal((4, 4))
    D1, D2 = np.diag(rng.standard_normal(4)), np.diag(rng.standard_normal(4))
    assert max_abs(bch_series_truncated(D1, D2) - (D1 + D2)) == 0
    assert max_abs(bch_series_truncated(A, A) - 2 * A) <= 1e-12
    small_x, small_y = 1e-3 * A, 1e-3 * A.T
    exact = scipy.linalg.logm(scipy.linalg.expm(small_x) @ scipy.linalg.expm(small_y))
    assert max_abs(bch_series_truncated(small_x, small_y) - exact) <= 1e-13
    with pytest.raises(ValueError):
        bch_series_truncated(A, A, order=5)


def test_series_truncation_does_not_reproduce_the_sweeps():
    # the sweeps are far from small, so a short series is nowhere near the product
    residuals = [bch_sweep_residual(4, order) for order in (1, 2, 3, 4)]
    assert min(residuals) > 0.1
