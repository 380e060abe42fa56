"""Synthetic data generators with known ground-truth couplings, used for
validation and by the CLI."""

from __future__ import annotations

import datetime as _dt

import numpy as np

from .errors import InvalidParams


def binary_entropy(eps: float) -> float:
    """H_b(eps) in bits; 0 at eps in {0, 1}."""
    if eps <= 0.0 or eps >= 1.0:
        return 0.0
    return float(-eps * np.log2(eps) - (1 - eps) * np.log2(1 - eps))


def bsc_te(eps: float) -> float:
    """Analytic transfer entropy of the binary symmetric channel driver."""
    return 1.0 - binary_entropy(eps)


def gen_bsc(T: int, epsilon: float, seed: int, amplitude: float = 0.01):
    """Driver Y of iid uniform bits; X_{n+1} = Y_n flipped with prob epsilon.

    Bits are emitted as +/-amplitude return values. Ground truth: the only
    coupling is Y -> X with TE = 1 - H_b(epsilon).
    """
    if not 0.0 <= epsilon <= 0.5:
        raise InvalidParams("epsilon must be in [0, 0.5]")
    rng = np.random.default_rng(seed)
    y = rng.integers(0, 2, size=T)
    flips = rng.random(T) < epsilon
    x = np.empty(T, dtype=np.int64)
    x[0] = rng.integers(0, 2)
    x[1:] = y[:-1] ^ flips[1:]
    series = {
        "X": amplitude * (2.0 * x - 1.0),
        "Y": amplitude * (2.0 * y - 1.0),
    }
    truth = {
        "kind": "bsc",
        "params": {"epsilon": epsilon, "T": T, "seed": seed},
        "edges": [["Y", "X"]],
        "te_bits": bsc_te(epsilon),
    }
    return series, truth


def gen_ar1(T: int, phi: float, seed: int, sigma: float = 0.01):
    """AR(1) series X plus an independent noise series Z."""
    if not -1.0 < phi < 1.0:
        raise InvalidParams("phi must have |phi| < 1")
    rng = np.random.default_rng(seed)
    x = np.empty(T)
    x[0] = rng.normal(0.0, sigma)
    eps = rng.normal(0.0, sigma, size=T)
    for t in range(1, T):
        x[t] = phi * x[t - 1] + eps[t]
    z = rng.normal(0.0, sigma, size=T)
    series = {"X": x, "Z": z}
    truth = {
        "kind": "ar1",
        "params": {"phi": phi, "T": T, "seed": seed, "sigma": sigma},
        # X's memory is a self-effect (visible in the self-conditional
        # entropy), not a cross edge; X and Z are mutually uninformative
        "edges": [],
    }
    return series, truth


def make_coupling(n: int, density: float, radius: float, seed: int) -> np.ndarray:
    """Random sparse coupling matrix rescaled to the requested spectral radius."""
    rng = np.random.default_rng(seed)
    C = rng.normal(size=(n, n)) * (rng.random((n, n)) < density)
    np.fill_diagonal(C, 0.0)
    rho = np.max(np.abs(np.linalg.eigvals(C)))
    if rho > 0:
        C *= radius / rho
    return C


def gen_var1(T: int, coupling: np.ndarray, seed: int, sigma: float = 0.01):
    """VAR(1): x_{t+1} = C x_t + noise. The day-t value of variable i moves
    the day-(t+1) value of variable j whenever C[j, i] is nonzero, so the
    ground-truth edge runs from the unlagged column i into column j."""
    C = np.asarray(coupling, dtype=float)
    n = C.shape[0]
    if C.shape != (n, n):
        raise InvalidParams("coupling matrix must be square")
    rho = np.max(np.abs(np.linalg.eigvals(C))) if n else 0.0
    if rho >= 1.0:
        raise InvalidParams(f"spectral radius {rho:.3f} must be < 1")
    rng = np.random.default_rng(seed)
    x = np.zeros((T, n))
    noise = rng.normal(0.0, sigma, size=(T, n))
    x[0] = noise[0]
    for t in range(1, T):
        x[t] = C @ x[t - 1] + noise[t]
    labels = [f"V{i}" for i in range(n)]
    series = {lbl: x[:, i] for i, lbl in enumerate(labels)}
    truth = {
        "kind": "var1",
        "params": {"T": T, "seed": seed, "sigma": sigma},
        "coupling": C.tolist(),
        "edges": [
            [labels[i], labels[j]]
            for j in range(n) for i in range(n) if i != j and C[j, i] != 0.0
        ],
    }
    return series, truth


def returns_to_prices(returns: np.ndarray, p0: float = 100.0) -> np.ndarray:
    """Closing prices whose log-returns reproduce the given series exactly."""
    return p0 * np.exp(np.concatenate([[0.0], np.cumsum(returns)]))


def iso_dates(n: int, start="2000-01-03"):
    d0 = _dt.date.fromisoformat(start)
    return tuple((d0 + _dt.timedelta(days=i)).isoformat() for i in range(n))
