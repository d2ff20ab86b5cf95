"""Numerical solution of the Bethe equations in rapidity variables.

The residual is the polynomial-cleared form

    F_j = (l_j + is)^L prod_{l != j} (l_j - l_l - i)
        - (l_j - is)^L prod_{l != j} (l_j - l_l + i),

whose roots away from the poles +-is coincide with the k-form quantization
conditions carrying the exponent L.  Root sets approaching +-is are treated
separately: around the exact pair {+is, -is} the cleared system vanishes to
high order along a whole curve, so Newton iterates landing there are never
accepted at face value.  For spin 1/2, m = 2 and even L the exact pair is a
genuine solution whose state is the alternating nearest-neighbour bound
state, built in closed form below.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Optional

import numpy as np

from . import hilbert
from .bethe import BetheState, build_bethe_state
from .errors import ChainError, NewtonFailureError
from .hamiltonian import ChainHamiltonian
from .su2 import Spin

DESCENDANT_CUTOFF = 1e8
DEGENERACY_TOL = 1e-6
SINGULAR_PROXIMITY_TOL = 1e-2
DEFLATION_TOL = 1e-6


@dataclass(frozen=True)
class BetheSystem:
    spin: Spin
    length: int
    m: int


@dataclass
class SolverOptions:
    tol_newton: float = 1e-10
    tol_eigen: float = 1e-8
    tol_hw: float = 1e-8
    tol_match: float = 1e-7
    max_iter: int = 80
    n_random: int = 64
    random_scale: float = 1.5
    random_scale_sweep: tuple = (0.5, 1.0, 2.5)
    seed: int = 0
    strategies: tuple = ("free-momenta", "two-string", "strings", "random")
    include_singular: bool = True


@dataclass
class RootCertificate:
    """A root set with its three residual certificates."""

    lam: tuple
    bethe_residual: float
    eigen_residual: float
    hw_residual: float
    energy: complex
    iterations: int
    singular: bool = False
    state: Optional[BetheState] = field(default=None, repr=False)

    def certified(self, opts: SolverOptions) -> bool:
        return (
            self.bethe_residual <= opts.tol_newton
            and self.eigen_residual <= opts.tol_eigen
            and self.hw_residual <= opts.tol_hw
        )

    def to_json(self):
        return {
            "lambda": [[z.real, z.imag] for z in self.lam],
            "bethe_residual": self.bethe_residual,
            "eigen_residual": self.eigen_residual,
            "hw_residual": self.hw_residual,
            "energy": [self.energy.real, self.energy.imag],
            "iterations": self.iterations,
            "singular": self.singular,
        }


def _products(lam: np.ndarray, s: float, length: int):
    m = len(lam)
    t1 = (lam + 1j * s) ** length
    t2 = (lam - 1j * s) ** length
    for j in range(m):
        for ell in range(m):
            if ell != j:
                t1[j] *= lam[j] - lam[ell] - 1j
                t2[j] *= lam[j] - lam[ell] + 1j
    return t1, t2


def bethe_residual(lam, system: BetheSystem) -> np.ndarray:
    """Polynomial-cleared residual vector F(lambda)."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    t1, t2 = _products(lam, system.spin.s, system.length)
    return t1 - t2


def residual_scale(lam, system: BetheSystem) -> np.ndarray:
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    t1, t2 = _products(lam, system.spin.s, system.length)
    return np.abs(t1) + np.abs(t2)


def scaled_residual(lam, system: BetheSystem) -> float:
    """max_j |F_j| / (|t1_j| + |t2_j|); the 0/0 of an exactly-cancelling pair
    counts as 0.  Relative scaling keeps the spurious near-zero sheet around
    the poles from masquerading as converged."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    residual = np.abs(bethe_residual(lam, system))
    scale = residual_scale(lam, system)
    out = np.zeros_like(residual)
    np.divide(residual, scale, out=out, where=scale > 0.0)
    return float(np.max(out))


def jacobian(lam, system: BetheSystem) -> np.ndarray:
    """Analytic Jacobian dF_j/dlambda_r; products differentiate termwise."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    m = len(lam)
    s, length = system.spin.s, system.length
    out = np.zeros((m, m), dtype=complex)
    for j in range(m):
        others = [ell for ell in range(m) if ell != j]
        dm = np.array([lam[j] - lam[ell] - 1j for ell in others])
        dp = np.array([lam[j] - lam[ell] + 1j for ell in others])
        pm, pp = np.prod(dm), np.prod(dp)
        a = (lam[j] + 1j * s) ** length
        b = (lam[j] - 1j * s) ** length
        da = length * (lam[j] + 1j * s) ** (length - 1)
        db = length * (lam[j] - 1j * s) ** (length - 1)
        diag = da * pm - db * pp
        for i, _ in enumerate(others):
            diag += a * np.prod(np.delete(dm, i)) - b * np.prod(np.delete(dp, i))
        out[j, j] = diag
        for i, r in enumerate(others):
            out[j, r] = -a * np.prod(np.delete(dm, i)) + b * np.prod(np.delete(dp, i))
    return out


def classify_roots(lam, system: BetheSystem) -> Optional[str]:
    """Reject reason for a converged iterate, or None if usable."""
    lam = np.atleast_1d(np.asarray(lam, dtype=complex))
    if not np.all(np.isfinite(lam)):
        return "nonfinite"
    if np.max(np.abs(lam)) > DESCENDANT_CUTOFF:
        return "descendant"
    m = len(lam)
    for a in range(m):
        for b in range(a + 1, m):
            if abs(lam[a] - lam[b]) < DEGENERACY_TOL:
                return "degenerate"
    s = system.spin.s
    if min(np.min(np.abs(lam - 1j * s)), np.min(np.abs(lam + 1j * s))) < SINGULAR_PROXIMITY_TOL:
        # the cleared system has a spurious near-zero sheet here; only the
        # exact pair is meaningful and it is handled in closed form
        return "singular"
    return None


def newton_solve(system: BetheSystem, seed, tol: float = 1e-10, max_iter: int = 80):
    """Newton iteration with step damping; returns (roots, iterations)."""
    lam = np.atleast_1d(np.asarray(seed, dtype=complex)).copy()
    if lam.size != system.m:
        raise ValueError(f"seed has {lam.size} components, system needs {system.m}")
    best = scaled_residual(lam, system)
    for it in range(max_iter):
        if not np.all(np.isfinite(lam)):
            raise NewtonFailureError("nonfinite", "iterate left the finite domain")
        if best <= tol:
            # one polishing step sharpens the root well below tol
            polished = _newton_step(lam, system)
            if polished is not None and scaled_residual(polished, system) <= best:
                lam = polished
            return lam, it
        step = _newton_step(lam, system, direction_only=True)
        if step is None:
            raise NewtonFailureError("singular-jacobian")
        accepted = False
        for damp in (1.0, 0.5, 0.25, 0.125, 1 / 16, 1 / 32, 1 / 64, 1 / 128):
            cand = lam + damp * step
            r = scaled_residual(cand, system)
            if np.isfinite(r) and r < best:
                lam, best = cand, r
                accepted = True
                break
        if not accepted:
            raise NewtonFailureError("stalled", f"residual {best:.3e} after {it} iterations")
    if best <= tol:
        return lam, max_iter
    raise NewtonFailureError("max-iter", f"residual {best:.3e} after {max_iter} iterations")


def _newton_step(lam, system, direction_only: bool = False):
    f = bethe_residual(lam, system)
    jac = jacobian(lam, system)
    try:
        step = np.linalg.solve(jac, -f)
    except np.linalg.LinAlgError:
        step, *_ = np.linalg.lstsq(jac, -f, rcond=None)
    if not np.all(np.isfinite(step)):
        return None
    return step if direction_only else lam + step


def free_momenta_rapidities(spin: Spin, length: int) -> list:
    """Exact one-magnon roots s*cot(pi n/L), n = 1..L-1."""
    out = []
    for n in range(1, length):
        out.append(spin.s / math.tan(math.pi * n / length) + 0.0j)
    return out


def _string_centers(spin: Spin, length: int) -> list:
    vals = sorted(z.real for z in free_momenta_rapidities(spin, length))
    centers = {0.0} | {round(v, 12) for v in vals}
    centers |= {round((a + b) / 2, 12) for a, b in zip(vals, vals[1:])}
    return sorted(centers)


def _partitions(m: int, maxpart: int = None):
    if maxpart is None:
        maxpart = m
    if m == 0:
        yield ()
        return
    for first in range(min(m, maxpart), 0, -1):
        for rest in _partitions(m - first, first):
            yield (first,) + rest


def seed_catalog(system: BetheSystem, strategy: str, rng=None,
                 n_random: int = 64, random_scale: float = 1.5) -> list:
    """Initial rapidity sets for one of the strategies
    {free-momenta, two-string, strings, random}."""
    spin, length, m = system.spin, system.length, system.m
    if m == 0:
        return []
    singles = free_momenta_rapidities(spin, length)
    if strategy == "free-momenta":
        return [np.array(combo, dtype=complex) for combo in combinations(singles, m)]
    if strategy == "two-string":
        if m < 2:
            return []
        seeds = []
        for c in _string_centers(spin, length):
            # widths off the ideal i/2: the exact-width configuration is an
            # invariant manifold of the Newton map that drains into the poles
            for width in (0.44, 0.57):
                pair = [c + 1j * width, c - 1j * width]
                if m == 2:
                    seeds.append(np.array(pair, dtype=complex))
                else:
                    far = [z for z in singles if abs(z - c) > 0.3]
                    for rest in combinations(far, m - 2):
                        seeds.append(np.array(pair + list(rest), dtype=complex))
        return seeds
    if strategy == "strings":
        # string-hypothesis seeds: split m into strings with spacing ~i,
        # one center per string, centers drawn from the quantization grid
        centers = _string_centers(spin, length)
        seeds = []
        for part in _partitions(m):
            if all(p == 1 for p in part):
                continue  # identical to free-momenta
            # placements grow like centers^len(part); coarsen for many strings
            grid = centers if len(part) <= 2 else centers[::2]
            stack = [(0, [])]
            while stack:
                idx, chosen = stack.pop()
                if idx == len(part):
                    for stretch in (0.88, 1.14):
                        lam = []
                        for n, c in chosen:
                            lam += [c + 0.5j * stretch * (n - 1 - 2 * a) for a in range(n)]
                        seeds.append(np.array(lam, dtype=complex))
                    continue
                for c in grid:
                    stack.append((idx + 1, chosen + [(part[idx], c)]))
        return seeds
    if strategy == "random":
        if rng is None:
            rng = np.random.default_rng(0)
        return [
            rng.normal(scale=random_scale, size=m) + 1j * rng.normal(scale=random_scale, size=m)
            for _ in range(n_random)
        ]
    raise ValueError(f"unknown seeding strategy {strategy!r}")


class DeflationRegistry:
    """Unordered root-set dedup via elementary symmetric polynomials,
    identifying a set with its complex conjugate."""

    def __init__(self, tol: float = DEFLATION_TOL):
        self.tol = tol
        self._fingerprints = []

    @staticmethod
    def _fingerprint(lam) -> np.ndarray:
        return np.poly(np.atleast_1d(np.asarray(lam, dtype=complex)))[1:]

    def _close(self, a: np.ndarray, b: np.ndarray) -> bool:
        return bool(np.all(np.abs(a - b) <= self.tol * (1.0 + np.abs(b))))

    def seen(self, lam) -> bool:
        fp = self._fingerprint(lam)
        fpc = np.conj(fp)
        return any(self._close(fp, ref) or self._close(fpc, ref) for ref in self._fingerprints)

    def add(self, lam) -> bool:
        """Register a root set; returns False if it was already present."""
        if self.seen(lam):
            return False
        self._fingerprints.append(self._fingerprint(lam))
        return True


def singular_pair_state(spin: Spin, length: int) -> BetheState:
    """Exact bound state of the rapidity pair {+i/2, -i/2} for spin 1/2.

    The regularized limit of the pair is the alternating nearest-neighbour
    two-magnon state sum_x (-1)^x |x, x+1> with energy -2, an exact
    eigenvector for every even L (checked by the residuals attached to its
    certificate, not assumed).
    """
    if spin.two_s != 1 or length % 2 != 0:
        raise ChainError("exact singular pair exists for spin 1/2 and even L only")
    basis = hilbert.sector_basis(spin, length, 2)
    vec = np.zeros(len(basis), dtype=complex)
    for x in range(1, length):
        vec[basis.index_of(hilbert.occupation_of((x, x + 1), length))] += (-1) ** x
    vec[basis.index_of(hilbert.occupation_of((1, length), length))] += (-1) ** length
    lam = (0.5j, -0.5j)
    return BetheState(spin, length, None, lam, basis, vec, -2.0 + 0.0j,
                      float(np.linalg.norm(vec)))


def _certificate(state: BetheState, bethe_res: float, iterations: int,
                 hamiltonian: ChainHamiltonian, singular: bool = False) -> RootCertificate:
    from .verify import eigen_residual, highest_weight_residual

    return RootCertificate(
        lam=tuple(complex(z) for z in state.lam),
        bethe_residual=bethe_res,
        eigen_residual=eigen_residual(state, hamiltonian),
        hw_residual=highest_weight_residual(state),
        energy=complex(state.energy),
        iterations=iterations,
        singular=singular,
        state=state,
    )


def solve_newton(system: BetheSystem, seed, opts: SolverOptions,
                 hamiltonian: ChainHamiltonian = None,
                 registry: DeflationRegistry = None) -> RootCertificate:
    """Run one seed through Newton, classification, deflation and state build."""
    if hamiltonian is None:
        hamiltonian = ChainHamiltonian(system.spin, system.length)
    lam, iterations = newton_solve(system, seed, tol=opts.tol_newton, max_iter=opts.max_iter)
    reason = classify_roots(lam, system)
    if reason is not None:
        raise NewtonFailureError(reason, f"roots {np.round(lam, 6)}")
    if registry is not None and not registry.add(lam):
        raise NewtonFailureError("duplicate", "root set already deflated")
    try:
        state = build_bethe_state(system.spin, system.length, lam=lam)
    except ChainError as exc:
        raise NewtonFailureError("state-degenerate", str(exc)) from exc
    return _certificate(state, scaled_residual(lam, system), iterations, hamiltonian)


def solve_sector(spin: Spin, length: int, m: int, opts: SolverOptions = None,
                 hamiltonian: ChainHamiltonian = None) -> list:
    """All distinct certified root sets the seed catalog reaches for one sector.

    Root sets are returned sorted by energy; each carries its Bethe,
    eigenvector and highest-weight residuals.  Sets failing the certification
    thresholds are dropped.
    """
    if opts is None:
        opts = SolverOptions()
    if hamiltonian is None:
        hamiltonian = ChainHamiltonian(spin, length)
    if m > spin.two_s * length:
        return []
    system = BetheSystem(spin, length, m)
    if m == 0:
        vacuum = build_bethe_state(spin, length, k=())
        return [_certificate(vacuum, 0.0, 0, hamiltonian)]

    rng = np.random.default_rng(opts.seed)
    registry = DeflationRegistry()
    certs = []
    for strategy in opts.strategies:
        scales = opts.random_scale_sweep if strategy == "random" else (1.0,)
        for scale in scales:
            for seed in seed_catalog(system, strategy, rng=rng, n_random=opts.n_random,
                                     random_scale=opts.random_scale * scale):
                try:
                    cert = solve_newton(system, seed, opts, hamiltonian, registry)
                except NewtonFailureError:
                    continue
                if cert.certified(opts):
                    certs.append(cert)

    if (opts.include_singular and spin.two_s == 1 and m == 2 and length % 2 == 0):
        state = singular_pair_state(spin, length)
        if registry.add(state.lam):
            bethe_res = scaled_residual(np.array(state.lam), system)
            cert = _certificate(state, bethe_res, 0, hamiltonian, singular=True)
            if cert.certified(opts):
                certs.append(cert)

    certs.sort(key=lambda c: (round(c.energy.real, 9), round(c.energy.imag, 9),
                              tuple(sorted((z.real, z.imag) for z in c.lam))))
    return certs
