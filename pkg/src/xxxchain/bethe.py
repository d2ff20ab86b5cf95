"""Plane-wave amplitudes, the scattering matrix, and Bethe wavefunctions.

Amplitudes follow the exchange relation A_{P T_j} = sigma(u_{Pj}, u_{P(j+1)}) A_P
with u = e^{ik}.  The closed product form used here is

    A_P = prod_{j<k} (1 - (1/2s) (u_{Pj}-1)(u_{Pk}-1) / (u_{Pj}-u_{Pk})),

which satisfies the exchange relation together with the coinciding-coordinate
constraint; the recursion itself is kept as a test oracle only.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from . import hilbert
from .errors import DegenerateRootsError, PoleError, SingularScatteringError
from .su2 import Spin

POLE_TOL = 1e-10
U_DEGENERACY_TOL = 1e-9
SIGMA_DENOM_TOL = 1e-13


def u_from_lambda(lam, spin: Spin):
    """Moebius map e^{ik} = (lambda + is)/(lambda - is)."""
    lam = np.asarray(lam, dtype=complex)
    if np.min(np.abs(lam - 1j * spin.s)) < POLE_TOL:
        raise PoleError(f"rapidity within {POLE_TOL} of +i*s")
    return (lam + 1j * spin.s) / (lam - 1j * spin.s)


def lambda_from_u(u, spin: Spin):
    u = np.asarray(u, dtype=complex)
    if np.min(np.abs(u - 1.0)) < U_DEGENERACY_TOL:
        raise PoleError("e^{ik} too close to 1 (zero-momentum / descendant direction)")
    return 1j * spin.s * (u + 1.0) / (u - 1.0)


def k_to_lambda(k, spin: Spin):
    return lambda_from_u(np.exp(1j * np.asarray(k, dtype=complex)), spin)


def lambda_to_k(lam, spin: Spin):
    u = u_from_lambda(lam, spin)
    if np.min(np.abs(u)) < POLE_TOL:
        raise PoleError(f"rapidity within {POLE_TOL} of -i*s")
    return -1j * np.log(u)


def sigma_u(u, v, spin: Spin):
    """Scattering matrix in shift-eigenvalue variables, eqn-level convention."""
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    two_s = spin.two_s
    num = u * v + (two_s - 1) * u - (two_s + 1) * v + 1.0
    den = u * v + (two_s - 1) * v - (two_s + 1) * u + 1.0
    if np.min(np.abs(den)) < SIGMA_DENOM_TOL:
        raise SingularScatteringError("scattering denominator vanishes for this pair")
    return -num / den


def sigma_lambda(lam, mu):
    """Rapidity form (lambda - mu - i)/(lambda - mu + i); spin independent."""
    lam = np.asarray(lam, dtype=complex)
    mu = np.asarray(mu, dtype=complex)
    den = lam - mu + 1j
    if np.min(np.abs(den)) < SIGMA_DENOM_TOL:
        raise SingularScatteringError("rapidity difference at -i")
    return (lam - mu - 1j) / den


@lru_cache(maxsize=None)
def permutations_of(m: int) -> tuple:
    return tuple(itertools.permutations(range(m)))


def _check_momenta(u: np.ndarray):
    m = len(u)
    if np.min(np.abs(u - 1.0), initial=np.inf) < U_DEGENERACY_TOL:
        raise PoleError("momentum with e^{ik} = 1 (descendant direction)")
    for a in range(m):
        for b in range(a + 1, m):
            if abs(u[a] - u[b]) < U_DEGENERACY_TOL:
                raise DegenerateRootsError(f"coinciding momenta at indices {a}, {b}")


def _amplitude_from_u(perm, u: np.ndarray, spin: Spin) -> complex:
    out = 1.0 + 0.0j
    for j in range(len(perm)):
        for k in range(j + 1, len(perm)):
            a, b = u[perm[j]], u[perm[k]]
            out *= 1.0 - (a - 1.0) * (b - 1.0) / (spin.two_s * (a - b))
    return out


def amplitude_AP(perm, k, spin: Spin) -> complex:
    """Closed-form plane-wave amplitude A_P for the permutation `perm` (0-based)."""
    u = np.exp(1j * np.asarray(k, dtype=complex))
    if sorted(perm) != list(range(len(u))):
        raise ValueError(f"{perm} is not a permutation of 0..{len(u) - 1}")
    _check_momenta(u)
    return _amplitude_from_u(tuple(perm), u, spin)


def amplitude_a(x, k, spin: Spin) -> complex:
    """Wavefunction amplitude a(x_1,...,x_m) = sum_P A_P prod_t u_{Pt}^{x_t}."""
    x = tuple(x)
    if any(a > b for a, b in zip(x, x[1:])):
        raise ValueError(f"coordinates must be non-decreasing, got {x}")
    u = np.exp(1j * np.asarray(k, dtype=complex))
    if len(x) != len(u):
        raise ValueError("coordinate tuple and momentum list have different lengths")
    _check_momenta(u)
    total = 0.0 + 0.0j
    for perm in permutations_of(len(u)):
        term = _amplitude_from_u(perm, u, spin)
        for t, xt in enumerate(x):
            term *= u[perm[t]] ** xt
        total += term
    return total


def energy_k(k, spin: Spin) -> complex:
    """E = -(1/2s) sum_j (2 - e^{ik_j} - e^{-ik_j})."""
    k = np.asarray(k, dtype=complex)
    if k.size == 0:
        return 0.0 + 0.0j
    u = np.exp(1j * k)
    return complex(-np.sum(2.0 - u - 1.0 / u) / spin.two_s)


def energy_lambda(lam, spin: Spin) -> complex:
    """E = -sum_j 2s/(lambda_j^2 + s^2)."""
    lam = np.asarray(lam, dtype=complex)
    if lam.size == 0:
        return 0.0 + 0.0j
    if min(np.min(np.abs(lam - 1j * spin.s)), np.min(np.abs(lam + 1j * spin.s))) < POLE_TOL:
        raise PoleError("rapidity at a pole of the energy")
    return complex(-np.sum(spin.two_s / (lam**2 + spin.s**2)))


@dataclass
class BetheState:
    """Realized Bethe vector on its fixed-m sector.

    `k` is None for states built from exactly singular rapidity sets, where
    individual momenta are not finite.
    """

    spin: Spin
    length: int
    k: Optional[tuple]
    lam: tuple
    basis: hilbert.SectorBasis
    vector: np.ndarray
    energy: complex
    norm: float

    @property
    def m(self) -> int:
        return self.basis.m

    def to_json(self, residual=None):
        out = {
            "two_s": self.spin.two_s,
            "L": self.length,
            "m": self.m,
            "k": None if self.k is None else [[z.real, z.imag] for z in self.k],
            "lambda": [[z.real, z.imag] for z in self.lam],
            "energy": [self.energy.real, self.energy.imag],
            "norm": self.norm,
        }
        if residual is not None:
            out["residual"] = residual
        return out


def build_bethe_state(spin: Spin, length: int, k=None, lam=None) -> BetheState:
    """Assemble Psi_m = sum_{x1<=...<=xm} a(x) |x1,...,xm> on the m sector."""
    if (k is None) == (lam is None):
        raise ValueError("provide exactly one of k or lam")
    if lam is not None:
        lam = tuple(complex(z) for z in np.atleast_1d(np.asarray(lam, dtype=complex)))
        k = tuple(np.atleast_1d(lambda_to_k(np.asarray(lam), spin)))
    else:
        k = tuple(complex(z) for z in np.atleast_1d(np.asarray(k, dtype=complex)))
        lam = tuple(np.atleast_1d(k_to_lambda(np.asarray(k), spin))) if k else ()
    m = len(k)
    if m > spin.two_s * length:
        raise ValueError(f"m={m} exceeds the maximal lowering number {spin.two_s * length}")
    basis = hilbert.sector_basis(spin, length, m)
    if m == 0:
        vec = np.ones(1, dtype=complex)
        return BetheState(spin, length, (), (), basis, vec, 0.0 + 0.0j, 1.0)

    u = np.exp(1j * np.asarray(k, dtype=complex))
    _check_momenta(u)
    perms = permutations_of(m)
    amps = [_amplitude_from_u(p, u, spin) for p in perms]
    # u_j^x for x = 0..L, reused across the whole sector
    upow = np.empty((m, length + 1), dtype=complex)
    upow[:, 0] = 1.0
    for x in range(1, length + 1):
        upow[:, x] = upow[:, x - 1] * u

    vec = np.zeros(len(basis), dtype=complex)
    for i, occ in enumerate(basis.states):
        coords = hilbert.coordinates_of(occ)
        a_val = 0.0 + 0.0j
        for p, amp in zip(perms, amps):
            term = amp
            for t, xt in enumerate(coords):
                term *= upow[p[t], xt]
            a_val += term
        alpha = 1.0
        for mj in occ:
            alpha *= math.sqrt(math.comb(spin.two_s, mj))
        vec[i] = a_val * alpha

    norm = float(np.linalg.norm(vec))
    scale = sum(abs(a) for a in amps) * np.sqrt(len(basis))
    if norm <= 1e-10 * max(scale, 1.0):
        raise DegenerateRootsError("Bethe state has vanishing norm for this root set")
    return BetheState(spin, length, k, lam, basis, vec, energy_k(k, spin), norm)
