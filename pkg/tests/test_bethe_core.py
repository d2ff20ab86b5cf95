import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from oracles import amplitude_by_recursion, plane_wave_sum, reduced_word
from xxxchain import bethe, hilbert
from xxxchain.errors import DegenerateRootsError, PoleError, SingularScatteringError
from xxxchain.hamiltonian import ChainHamiltonian
from xxxchain.su2 import Spin

SPINS = [Spin(1), Spin(2), Spin(3), Spin(4)]

finite = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False, allow_infinity=False)
complex_numbers = st.builds(complex, finite, finite)


def test_k_lambda_roundtrip_example():
    lam = 0.7 + 0.3j
    spin = Spin(2)
    k = bethe.lambda_to_k(lam, spin)
    assert abs(bethe.k_to_lambda(k, spin) - lam) < 1e-12


def test_real_rapidity_gives_unimodular_u():
    for lam in (-2.1, -0.3, 0.8, 4.0):
        u = bethe.u_from_lambda(lam, Spin(1))
        assert abs(abs(u) - 1.0) < 1e-14


def test_large_rapidity_limits_to_zero_momentum():
    u = bethe.u_from_lambda(1e10, Spin(2))
    assert abs(u - 1.0) < 1e-9
    with pytest.raises(PoleError):
        bethe.lambda_from_u(u, Spin(2))


def test_pole_guards():
    with pytest.raises(PoleError):
        bethe.u_from_lambda(0.5j, Spin(1))
    with pytest.raises(PoleError):
        bethe.lambda_to_k(-0.5j, Spin(1))  # u = 0 has no finite momentum
    with pytest.raises(PoleError):
        bethe.k_to_lambda(1e-12, Spin(1))


@settings(max_examples=80, deadline=None)
@given(lam=complex_numbers, two_s=st.integers(min_value=1, max_value=4))
def test_k_lambda_roundtrip_property(lam, two_s):
    spin = Spin(two_s)
    assume(min(abs(lam - 1j * spin.s), abs(lam + 1j * spin.s)) > 0.05)
    k = bethe.lambda_to_k(lam, spin)
    assert abs(bethe.k_to_lambda(k, spin) - lam) < 1e-10 * (1 + abs(lam))


def test_sigma_at_equal_arguments():
    for spin in SPINS:
        for u in (0.3 + 0.2j, -1.4 + 2.0j, 2.5 - 0.7j):
            assert abs(bethe.sigma_u(u, u, spin) + 1.0) < 1e-13


@settings(max_examples=150, deadline=None)
@given(u=complex_numbers, v=complex_numbers, two_s=st.integers(min_value=1, max_value=4))
def test_sigma_unitarity(u, v, two_s):
    spin = Spin(two_s)
    ts = spin.two_s
    assume(abs(u * v + (ts - 1) * v - (ts + 1) * u + 1) > 1e-2)
    assume(abs(u * v + (ts - 1) * u - (ts + 1) * v + 1) > 1e-2)
    assert abs(bethe.sigma_u(u, v, spin) * bethe.sigma_u(v, u, spin) - 1.0) < 1e-12


def test_sigma_braid_relation():
    rng = np.random.default_rng(2)
    for spin in SPINS:
        for _ in range(200):
            u, v, w = rng.normal(size=3) + 1j * rng.normal(size=3)
            try:
                s12 = bethe.sigma_u(u, v, spin)
                s13 = bethe.sigma_u(u, w, spin)
                s23 = bethe.sigma_u(v, w, spin)
            except SingularScatteringError:
                continue
            assert abs(s12 * s13 * s23 - s23 * s13 * s12) < 1e-12


def test_sigma_rapidity_form_spin_independent():
    rng = np.random.default_rng(3)
    for _ in range(100):
        lam, mu = rng.normal(size=2) + 1j * rng.normal(size=2)
        if abs(lam - mu + 1j) < 1e-2 or abs(lam - mu - 1j) < 1e-2:
            continue
        target = (lam - mu - 1j) / (lam - mu + 1j)
        for spin in SPINS:
            if min(abs(lam - 1j * spin.s), abs(lam + 1j * spin.s),
                   abs(mu - 1j * spin.s), abs(mu + 1j * spin.s)) < 1e-2:
                continue
            u = bethe.u_from_lambda(lam, spin)
            v = bethe.u_from_lambda(mu, spin)
            assert abs(bethe.sigma_u(u, v, spin) - target) < 1e-12
            assert abs(bethe.sigma_lambda(lam, mu) - target) < 1e-14


def test_sigma_singular_pair_error():
    with pytest.raises(SingularScatteringError):
        bethe.sigma_u(1.0 + 0j, 1.0 + 0j, Spin(1))  # denominator (u-1)^2 = 0


def test_amplitude_identity_is_empty_product():
    assert bethe.amplitude_AP((0,), [0.4 + 0.1j], Spin(2)) == 1.0 + 0.0j


def test_amplitude_exchange_m2():
    rng = np.random.default_rng(4)
    for spin in SPINS:
        k = rng.normal(size=2) + 0.4j * rng.normal(size=2)
        u = np.exp(1j * k)
        a_id = bethe.amplitude_AP((0, 1), k, spin)
        a_t = bethe.amplitude_AP((1, 0), k, spin)
        assert abs(a_t - bethe.sigma_u(u[0], u[1], spin) * a_id) < 1e-12 * abs(a_id)


def test_amplitude_recursion_oracle_longest_element():
    rng = np.random.default_rng(5)
    for spin in (Spin(1), Spin(2), Spin(3)):
        k = rng.normal(size=3) + 0.3j * rng.normal(size=3)
        w0 = (2, 1, 0)
        direct = bethe.amplitude_AP(w0, k, spin)
        for reverse_scan in (False, True):
            rec = amplitude_by_recursion(w0, k, spin, reverse_scan=reverse_scan)
            assert abs(direct - rec) < 1e-12 * max(1.0, abs(direct))
    # the two reduced words of the longest element really differ
    assert reduced_word((2, 1, 0)) != reduced_word((2, 1, 0), reverse_scan=True)


def test_amplitude_recursion_oracle_all_perms_m4():
    rng = np.random.default_rng(6)
    spin = Spin(2)
    k = rng.normal(size=4) + 0.2j * rng.normal(size=4)
    for perm in bethe.permutations_of(4):
        direct = bethe.amplitude_AP(perm, k, spin)
        rec = amplitude_by_recursion(perm, k, spin)
        assert abs(direct - rec) < 1e-12 * max(1.0, abs(direct))


def test_amplitude_guards():
    with pytest.raises(DegenerateRootsError):
        bethe.amplitude_AP((0, 1), [0.3, 0.3], Spin(1))
    with pytest.raises(PoleError):
        bethe.amplitude_AP((0, 1), [0.0, 0.4], Spin(1))
    with pytest.raises(ValueError):
        bethe.amplitude_AP((0, 0), [0.3, 0.4], Spin(1))


def test_amplitude_a_single_magnon():
    k = 0.37 - 0.12j
    for x in range(1, 6):
        assert abs(bethe.amplitude_a((x,), [k], Spin(2)) - np.exp(1j * k * x)) < 1e-13


def test_amplitude_a_k_relabeling_invariance():
    rng = np.random.default_rng(7)
    k = rng.normal(size=3) + 0.3j * rng.normal(size=3)
    x = (1, 3, 4)
    spin = Spin(3)
    reference = bethe.amplitude_a(x, k, spin)
    for order in ((1, 0, 2), (2, 1, 0), (1, 2, 0)):
        val = bethe.amplitude_a(x, [k[i] for i in order], spin)
        assert abs(val - reference) < 1e-12 * max(1.0, abs(reference))


def test_amplitude_a_requires_sorted_coordinates():
    with pytest.raises(ValueError):
        bethe.amplitude_a((3, 1), [0.2, 0.4], Spin(1))


def test_coinciding_coordinate_constraint():
    # (S_i S_{i+1} + (2s-1) S_i - (2s+1) S_{i+1} + 1) a = 0 at x_i = x_{i+1}
    rng = np.random.default_rng(8)
    for spin in SPINS:
        for m in (2, 3, 4):
            k = rng.normal(size=m) + 0.3j * rng.normal(size=m)
            x = sorted(int(v) for v in rng.integers(1, 6, size=m))
            for i in range(m - 1):
                xi = list(x)
                xi[i + 1] = xi[i]
                ts = spin.two_s

                def shifted(*steps):
                    out = list(xi)
                    for slot, step in steps:
                        out[slot] += step
                    return plane_wave_sum(out, k, spin)

                val = (shifted((i, 1), (i + 1, 1))
                       + (ts - 1) * shifted((i, 1))
                       - (ts + 1) * shifted((i + 1, 1))
                       + shifted())
                scale = max(abs(shifted()), abs(shifted((i, 1), (i + 1, 1))), 1.0)
                assert abs(val) < 1e-11 * scale


def test_product_identity_chained_constraint():
    for spin in (Spin(2), Spin(3)):
        for m in (2, 3):
            for z1 in (0.3 + 0.7j, -1.1 + 0.2j, 1.7 - 0.6j):
                zs = [complex(z1)]
                for _ in range(m - 1):
                    z = zs[-1]
                    zs.append((1 + (spin.two_s - 1) * z) / ((spin.two_s + 1) - z))
                chi = []
                for jp in range(1, m + 1):
                    c = (-1.0) ** (m + jp)
                    for kk in range(1, m - jp + 1):
                        c *= spin.two_s / kk - 1.0
                    for ll in range(1, jp):
                        c *= spin.two_s / ll + 1.0
                    chi.append(c)
                lhs = np.prod(zs)
                rhs = 1 - m + sum(c * z for c, z in zip(chi, zs))
                assert abs(lhs - rhs) < 1e-11


def test_build_state_m1_spin_half_L2():
    state = bethe.build_bethe_state(Spin(1), 2, k=[np.pi])
    vec = state.vector / state.vector[np.argmax(np.abs(state.vector))]
    basis = state.basis
    assert abs(vec[basis.index_of((1, 0))] + vec[basis.index_of((0, 1))]) < 1e-12
    ham = ChainHamiltonian(Spin(1), 2)
    hv = ham.sector_matrix(1) @ state.vector
    assert np.max(np.abs(hv + 4.0 * state.vector)) < 1e-12
    assert abs(state.energy + 4.0) < 1e-12


def test_build_state_matches_coordinate_sum():
    spin, length = Spin(2), 4
    k = [0.9 - 0.1j]
    state = bethe.build_bethe_state(spin, length, k=k)
    direct = sum(
        np.exp(1j * k[0] * x) * hilbert.coords_to_vector(spin, length, (x,))
        for x in range(1, length + 1)
    )
    assert np.max(np.abs(state.vector - direct)) < 1e-12


def test_build_state_sz_eigenvalue():
    from xxxchain.su2 import global_generator

    spin, length = Spin(2), 3
    rng = np.random.default_rng(9)
    k = rng.normal(size=2) + 0.2j * rng.normal(size=2)
    state = bethe.build_bethe_state(spin, length, k=k)
    full = hilbert.embed_sector_vector(state.basis, state.vector)
    sz = global_generator(spin, length, "z")
    target = (length * spin.s - 2) * full
    assert np.max(np.abs(sz.apply(full) - target)) < 1e-10 * np.linalg.norm(full)


def test_build_state_m0_is_vacuum():
    state = bethe.build_bethe_state(Spin(1), 4, k=())
    assert state.m == 0
    assert state.energy == 0
    assert np.allclose(state.vector, [1.0])


def test_build_state_rejects_pole_rapidities():
    with pytest.raises(PoleError):
        bethe.build_bethe_state(Spin(1), 4, lam=[0.5j, -0.5j])


def test_build_state_rejects_m_beyond_capacity():
    with pytest.raises(ValueError):
        bethe.build_bethe_state(Spin(1), 2, k=[0.3, 0.9, 1.2])
    with pytest.raises(ValueError):
        bethe.build_bethe_state(Spin(1), 2)


def test_energy_examples():
    assert bethe.energy_k((), Spin(1)) == 0.0
    for k in (0.3, 1.2, np.pi / 2):
        assert abs(bethe.energy_k([k], Spin(1)) + 2 * (1 - np.cos(k))) < 1e-13
    with pytest.raises(PoleError):
        bethe.energy_lambda([1j], Spin(2))


@settings(max_examples=100, deadline=None)
@given(
    lams=st.lists(complex_numbers, min_size=1, max_size=4),
    two_s=st.integers(min_value=1, max_value=4),
)
def test_energy_forms_agree(lams, two_s):
    spin = Spin(two_s)
    lam = np.array(lams)
    assume(min(np.min(np.abs(lam - 1j * spin.s)), np.min(np.abs(lam + 1j * spin.s))) > 0.05)
    k = bethe.lambda_to_k(lam, spin)
    assert abs(bethe.energy_lambda(lam, spin) - bethe.energy_k(k, spin)) < 1e-12 * (1 + abs(bethe.energy_k(k, spin)))


def test_state_json_shape():
    state = bethe.build_bethe_state(Spin(1), 4, k=[2 * np.pi / 4])
    payload = state.to_json(residual=1e-15)
    assert payload["two_s"] == 1 and payload["L"] == 4 and payload["m"] == 1
    assert len(payload["k"]) == 1 and len(payload["lambda"]) == 1
    assert set(payload) == {"two_s", "L", "m", "k", "lambda", "energy", "norm", "residual"}
