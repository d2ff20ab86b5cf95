"""Self-contained invariant suite behind the `verify` command.

Each check returns (name, passed, detail) with the measured worst violation,
so a failure names the broken invariant directly.
"""

from __future__ import annotations

import numpy as np

from . import bethe, hilbert
from .hamiltonian import ChainHamiltonian, check_beta_recursions, local_h
from .su2 import (
    Spin,
    e_minus,
    g_matrix,
    global_generator,
    s_minus,
    s_plus,
    s_z,
)

LOCAL_SPINS = (Spin(1), Spin(2), Spin(3), Spin(4))
CHAIN_GRID = ((Spin(1), 4), (Spin(2), 3), (Spin(3), 2))


def _check(name, worst, tol):
    return (name, bool(worst < tol), f"max violation {float(worst):.3e} (tol {tol:.0e})")


def su2_local_relations():
    worst = 0.0
    for spin in LOCAL_SPINS + (Spin(5),):
        sm, sp, sz = s_minus(spin), s_plus(spin), s_z(spin)
        worst = max(worst, np.max(np.abs(sp @ sm - sm @ sp - 2 * sz)))
        worst = max(worst, np.max(np.abs(sz @ sp - sp @ sz - sp)))
        worst = max(worst, np.max(np.abs(sz @ sm - sm @ sz + sm)))
    return _check("su2-local-commutators", worst, 1e-13)


def su2_casimir():
    worst = 0.0
    for spin in LOCAL_SPINS:
        sm, sp, sz = s_minus(spin), s_plus(spin), s_z(spin)
        c2 = sz @ sz + 0.5 * (sp @ sm + sm @ sp)
        worst = max(worst, np.max(np.abs(c2 - spin.s * (spin.s + 1) * np.eye(spin.dim))))
    return _check("su2-casimir", worst, 1e-13)


def su2_e_minus():
    worst = 0.0
    for spin in LOCAL_SPINS:
        g = g_matrix(spin)
        worst = max(worst, np.max(np.abs(e_minus(spin) - g @ s_minus(spin) @ np.linalg.inv(g))))
        power = np.linalg.matrix_power(e_minus(spin), spin.two_s + 1)
        worst = max(worst, np.max(np.abs(power)))
    return _check("su2-e-minus", worst, 1e-13)


def su2_global(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin, length in CHAIN_GRID:
        sp_op = global_generator(spin, length, "+")
        sm_op = global_generator(spin, length, "-")
        sz_op = global_generator(spin, length, "z")
        vec = rng.normal(size=sp_op.dim) + 1j * rng.normal(size=sp_op.dim)
        lhs = sp_op.apply(sm_op.apply(vec)) - sm_op.apply(sp_op.apply(vec))
        worst = max(worst, np.max(np.abs(lhs - 2 * sz_op.apply(vec))) / np.linalg.norm(vec))
    return _check("su2-global-commutators", worst, 1e-12)


def beta_symmetry():
    from .hamiltonian import build_beta_table

    worst = 0.0
    for spin in LOCAL_SPINS:
        table = build_beta_table(spin)
        for (m1, m2, n), v in table.entries.items():
            worst = max(worst, abs(table.entries[(m2, m1, -n)] - v))
    return _check("beta-symmetry", worst, 1e-15)


def beta_recursions():
    worst = max(check_beta_recursions(spin) for spin in LOCAL_SPINS + (Spin(5),))
    return _check("beta-recursions", worst, 1e-13)


def local_h_symmetric():
    worst = 0.0
    for spin in LOCAL_SPINS + (Spin(5),):
        h = local_h(spin)
        worst = max(worst, np.max(np.abs(h - h.T)))
    return _check("local-h-symmetric", worst, 1e-13)


def local_h_commutators():
    worst = 0.0
    for spin in LOCAL_SPINS + (Spin(5),):
        h = local_h(spin)
        eye = np.eye(spin.dim)
        for op in (s_z(spin), s_plus(spin), s_minus(spin)):
            total = np.kron(op, eye) + np.kron(eye, op)
            worst = max(worst, np.max(np.abs(total @ h - h @ total)))
    return _check("local-h-commutators", worst, 1e-12)


def vacuum_annihilated():
    worst = 0.0
    for spin, length in ((Spin(1), 6), (Spin(2), 4), (Spin(3), 3), (Spin(4), 2)):
        ham = ChainHamiltonian(spin, length)
        vac = np.zeros(ham.dim)
        vac[0] = 1.0
        worst = max(worst, np.max(np.abs(ham.apply(vac))))
    return _check("vacuum-annihilated", worst, 1e-13)


def sector_vs_full(seed=0):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin, length, m in ((Spin(1), 4, 2), (Spin(2), 3, 2)):
        ham = ChainHamiltonian(spin, length)
        basis = hilbert.sector_basis(spin, length, m)
        vec = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        inside = hilbert.apply_chain_h_in_sector(ham, basis, vec)
        full = ham.apply(hilbert.embed_sector_vector(basis, vec))
        back = np.array([full[hilbert.full_index(occ, spin.dim)] for occ in basis.states])
        worst = max(worst, np.max(np.abs(inside - back)))
        leak = np.linalg.norm(full) ** 2 - np.linalg.norm(back) ** 2
        worst = max(worst, abs(leak))
    return _check("sector-apply-matches-full", worst, 1e-12)


def sigma_consistency(seed=0, samples=300):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin in LOCAL_SPINS:
        count = 0
        while count < samples:
            u, v, w = rng.normal(size=3) + 1j * rng.normal(size=3)
            try:
                suv, svu = bethe.sigma_u(u, v, spin), bethe.sigma_u(v, u, spin)
                suw, svw = bethe.sigma_u(u, w, spin), bethe.sigma_u(v, w, spin)
            except bethe.SingularScatteringError:
                continue
            count += 1
            worst = max(worst, abs(suv * svu - 1.0))
            worst = max(worst, abs(suv * suw * svw - svw * suw * suv))
    return _check("sigma-unitarity-braid", worst, 1e-12)


def sigma_rapidity_form(seed=0, samples=200):
    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    while count < samples:
        lam, mu = rng.normal(size=2) + 1j * rng.normal(size=2)
        if abs(lam - mu + 1j) < 1e-2 or abs(lam - mu - 1j) < 1e-2:
            continue
        count += 1
        target = (lam - mu - 1j) / (lam - mu + 1j)
        for spin in LOCAL_SPINS:
            if min(abs(lam - 1j * spin.s), abs(lam + 1j * spin.s),
                   abs(mu - 1j * spin.s), abs(mu + 1j * spin.s)) < 1e-2:
                continue
            val = bethe.sigma_u(bethe.u_from_lambda(lam, spin),
                                bethe.u_from_lambda(mu, spin), spin)
            worst = max(worst, abs(val - target))
    return _check("sigma-rapidity-form", worst, 1e-12)


def energy_forms(seed=0, samples=200):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin in LOCAL_SPINS:
        count = 0
        while count < samples:
            lam = rng.normal(size=3) + 1j * rng.normal(size=3)
            if min(np.min(np.abs(lam - 1j * spin.s)), np.min(np.abs(lam + 1j * spin.s))) < 1e-2:
                continue
            count += 1
            k = bethe.lambda_to_k(lam, spin)
            worst = max(worst, abs(bethe.energy_lambda(lam, spin) - bethe.energy_k(k, spin)))
    return _check("energy-form-equality", worst, 1e-12)


def dispersion():
    from .hamiltonian import beta

    worst = 0.0
    for spin in LOCAL_SPINS + (Spin(5),):
        coeffs = (beta(spin, 1, 0, 0), beta(spin, 0, 1, 0),
                  beta(spin, 1, 0, -1), beta(spin, 0, 1, 1))
        for k in np.linspace(-np.pi, np.pi, 37):
            val = coeffs[0] + coeffs[1] + coeffs[2] * np.exp(1j * k) + coeffs[3] * np.exp(-1j * k)
            target = -(2 - np.exp(1j * k) - np.exp(-1j * k)) / spin.two_s
            worst = max(worst, abs(val - target))
    return _check("single-magnon-dispersion", worst, 1e-13)


def exchange_relation(seed=0, samples=40):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin in LOCAL_SPINS:
        for _ in range(samples):
            m = int(rng.integers(2, 5))
            k = rng.normal(size=m) + 0.3j * rng.normal(size=m)
            u = np.exp(1j * k)
            perms = bethe.permutations_of(m)
            perm = perms[rng.integers(len(perms))]
            j = int(rng.integers(m - 1))
            swapped = list(perm)
            swapped[j], swapped[j + 1] = swapped[j + 1], swapped[j]
            lhs = bethe.amplitude_AP(tuple(swapped), k, spin)
            rhs = bethe.sigma_u(u[perm[j]], u[perm[j + 1]], spin) * bethe.amplitude_AP(perm, k, spin)
            worst = max(worst, abs(lhs - rhs) / max(abs(rhs), 1e-30))
    return _check("amplitude-exchange-relation", worst, 1e-12)


def coinciding_constraint(seed=0, samples=30):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for spin in LOCAL_SPINS:
        for _ in range(samples):
            m = int(rng.integers(2, 5))
            k = rng.normal(size=m) + 0.3j * rng.normal(size=m)
            u = np.exp(1j * k)
            i = int(rng.integers(m - 1))
            x = sorted(rng.integers(1, 7, size=m))
            x[i + 1] = x[i]
            val = 0.0
            scale = 0.0
            for perm in bethe.permutations_of(m):
                amp = bethe._amplitude_from_u(perm, u, spin)
                base = amp * np.prod([u[perm[t]] ** x[t] for t in range(m)])
                ui, uj = u[perm[i]], u[perm[i + 1]]
                val += base * (ui * uj + (spin.two_s - 1) * ui - (spin.two_s + 1) * uj + 1)
                scale += abs(base) * (1 + abs(ui)) * (1 + abs(uj))
            worst = max(worst, abs(val) / scale)
    return _check("coinciding-coordinate-constraint", worst, 1e-11)


def product_identity():
    worst = 0.0
    for spin in (Spin(2), Spin(3)):
        for m in (2, 3):
            for z1 in (0.3 + 0.7j, -1.2 + 0.4j, 2.0 - 0.9j):
                zs = [complex(z1)]
                for _ in range(m - 1):
                    z = zs[-1]
                    zs.append((1 + (spin.two_s - 1) * z) / ((spin.two_s + 1) - z))
                chi = []
                for jp in range(1, m + 1):
                    c = (-1.0) ** (m + jp)
                    for kk in range(1, m - jp + 1):
                        c *= spin.two_s / kk - 1
                    for ll in range(1, jp):
                        c *= spin.two_s / ll + 1
                    chi.append(c)
                lhs = np.prod(zs)
                rhs = 1 - m + sum(c * z for c, z in zip(chi, zs))
                worst = max(worst, abs(lhs - rhs))
    return _check("shift-eigenvalue-product-identity", worst, 1e-11)


def pipeline_reconcile():
    from .verify import reconcile_spectrum

    report = reconcile_spectrum(Spin(1), 4, 2)
    worst = 1.0 - report.matched_fraction
    for rec in report.bethe:
        worst = max(worst, abs(rec.energy.imag))
    return _check("pipeline-reconcile-16-levels", worst, 1e-9)


ALL_CHECKS = (
    su2_local_relations,
    su2_casimir,
    su2_e_minus,
    su2_global,
    beta_symmetry,
    beta_recursions,
    local_h_symmetric,
    local_h_commutators,
    vacuum_annihilated,
    sector_vs_full,
    sigma_consistency,
    sigma_rapidity_form,
    energy_forms,
    dispersion,
    exchange_relation,
    coinciding_constraint,
    product_identity,
    pipeline_reconcile,
)


def chain_checks_at(spin: Spin, length: int, seed: int = 0) -> list:
    """Vacuum, symmetry and sector checks for one requested (spin, L)."""
    rng = np.random.default_rng(seed)
    ham = ChainHamiltonian(spin, length)
    vac = np.zeros(ham.dim)
    vac[0] = 1.0
    results = [_check(f"vacuum-annihilated[s={spin},L={length}]",
                      np.max(np.abs(ham.apply(vac))), 1e-13)]
    vec = rng.normal(size=ham.dim) + 1j * rng.normal(size=ham.dim)
    worst = 0.0
    for alpha in ("z", "+", "-"):
        gen = global_generator(spin, length, alpha)
        comm = gen.apply(ham.apply(vec)) - ham.apply(gen.apply(vec))
        worst = max(worst, np.max(np.abs(comm)) / np.linalg.norm(vec))
    results.append(_check(f"chain-su2-commutators[s={spin},L={length}]", worst, 1e-12))
    worst = 0.0
    for m in range(spin.two_s * length + 1):
        basis = hilbert.sector_basis(spin, length, m)
        sub = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        inside = hilbert.apply_chain_h_in_sector(ham, basis, sub)
        full = ham.apply(hilbert.embed_sector_vector(basis, sub))
        back = np.array([full[hilbert.full_index(occ, spin.dim)] for occ in basis.states])
        worst = max(worst, np.max(np.abs(inside - back)))
    results.append(_check(f"sector-apply-matches-full[s={spin},L={length}]", worst, 1e-12))
    return results


def run_all(seed: int = 0, chain=None) -> list:
    """Run every invariant check; `chain` = (spin, length) appends the
    chain-level checks for that pair to the default grid."""
    results = []
    for fn in ALL_CHECKS:
        try:
            if "seed" in fn.__code__.co_varnames[: fn.__code__.co_argcount]:
                results.append(fn(seed=seed))
            else:
                results.append(fn())
        except Exception as exc:  # a crash is a failure, not an abort
            results.append((fn.__name__, False, f"raised {type(exc).__name__}: {exc}"))
    if chain is not None:
        spin, length = chain
        try:
            results.extend(chain_checks_at(spin, length, seed=seed))
        except Exception as exc:
            results.append((f"chain-checks[s={spin},L={length}]", False,
                            f"raised {type(exc).__name__}: {exc}"))
    return results
