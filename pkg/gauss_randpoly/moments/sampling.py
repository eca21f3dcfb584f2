"""Monte Carlo oracle for E_N through the N+1 variable representation.

For σ² >= 1, X_k = Y_k + sqrt((σ²-1)/N)·Y_0 with Y_0..Y_N i.i.d. standard
normal. For σ² < 1, X = Qᵀ·Y where Q is orthogonal with first row 1/√N and
Y_1 ~ 𝒩(0, σ²), Y_2..Y_N standard.
"""
import logging
import math
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from gauss_randpoly.config import MC_N_SOFT_CAP
from gauss_randpoly.errors import DomainError, McVarianceWarning
from gauss_randpoly.exact.algebra import to_rational
from gauss_randpoly.moments.isserlis import CovarianceSpec

logger = logging.getLogger(__name__)

DEFAULT_STREAMS = 8
CHUNK_SIZE = 100_000


@dataclass(frozen=True)
class McEstimate:
    """Sample mean of Π(X_n²+z²) with its standard error."""

    mean: float
    stderr: float
    samples: int
    seed: int

    def __post_init__(self):
        if self.stderr < 0:
            raise DomainError("stderr must be >= 0")
        if self.samples < 1:
            raise DomainError("samples must be >= 1")

    def exact_stderr(self, reference, second_moment):
        """Standard error implied by the exact first and second moments of the integrand."""
        variance = float(Fraction(second_moment) - Fraction(reference) ** 2)
        return math.sqrt(max(variance, 0.0) / self.samples)

    def z_score(self, reference, second_moment=None):
        """
        (mean - reference)/stderr, 0 when both coincide exactly.

        The product of N squares is heavy tailed, and for large N or σ² the
        sample standard error runs well below the true one. Passing the exact
        second moment makes the larger of the two the denominator.
        """
        delta = self.mean - float(reference)
        stderr = self.stderr
        if second_moment is not None:
            stderr = max(stderr, self.exact_stderr(reference, second_moment))
        if stderr == 0:
            return 0.0 if delta == 0 else math.copysign(math.inf, delta)
        return delta / stderr


@lru_cache(maxsize=64)
def _rotation(N):
    """Orthogonal Q (as columns) whose first column is ones/√N, completed by QR."""
    basis = np.eye(N)
    basis[:, 0] = 1.0
    q, _ = np.linalg.qr(basis)
    if q[0, 0] < 0:
        q[:, 0] = -q[:, 0]
    q.setflags(write=False)
    return q


def sample_matrix(spec, rng, size):
    """
    ``size`` independent draws of (X_1..X_N), one per row.

    Args:
        spec(CovarianceSpec): N and σ²
        rng(numpy.random.Generator): source of standard normals
        size(int): number of draws

    Returns:
        numpy.ndarray: shape (size, N)
    """
    N = spec.N
    sigma2 = float(spec.sigma2)
    if spec.sigma2 >= 1:
        common = rng.standard_normal((size, 1))
        own = rng.standard_normal((size, N))
        return own + math.sqrt(float(spec.coupling)) * common
    y = rng.standard_normal((size, N))
    y[:, 0] *= math.sqrt(sigma2)
    return y @ _rotation(N).T


def sample_vector(spec, rng):
    """One draw of (X_1..X_N) with law 𝒩(0, Σ_N)."""
    return sample_matrix(spec, rng, 1)[0]


def _partial_sums(N, z2, sigma2, samples, seed_seq):
    """(count, mean, M2) of the product over ``samples`` draws of one stream."""
    spec = CovarianceSpec(N, to_rational(sigma2))
    rng = np.random.default_rng(seed_seq)
    count, mean, m2 = 0, 0.0, 0.0
    remaining = samples
    while remaining > 0:
        size = min(CHUNK_SIZE, remaining)
        x = sample_matrix(spec, rng, size)
        values = np.prod(x * x + z2, axis=1)
        chunk = (size, float(values.mean()), float(((values - values.mean()) ** 2).sum()))
        count, mean, m2 = _combine((count, mean, m2), chunk)
        remaining -= size
    return count, mean, m2


def _combine(left, right):
    n_a, mean_a, m2_a = left
    n_b, mean_b, m2_b = right
    if n_a == 0:
        return right
    if n_b == 0:
        return left
    n = n_a + n_b
    delta = mean_b - mean_a
    return n, mean_a + delta * n_b / n, m2_a + m2_b + delta * delta * n_a * n_b / n


def merge_estimates(parts, seed):
    """
    Pools per-stream (count, mean, M2) triples into one McEstimate.

    Args:
        parts(list): triples in stream order
        seed(int): the seed the streams were spawned from

    Returns:
        McEstimate: pooled mean and its standard error
    """
    total = (0, 0.0, 0.0)
    for part in parts:
        total = _combine(total, part)
    count, mean, m2 = total
    variance = m2 / (count - 1) if count > 1 else 0.0
    return McEstimate(mean=mean, stderr=math.sqrt(variance / count), samples=count, seed=seed)


def mc_expected_polynomial(N, z2, sigma2, samples, seed, workers=1, streams=DEFAULT_STREAMS):
    """
    Monte Carlo estimate of E_N(z;σ) = Exp_N[Π_n (X_n²+z²)].

    Samples are split over ``streams`` generators spawned from
    ``SeedSequence(seed)``; the split does not depend on ``workers``, so the
    result is the same however many processes run it.

    Args:
        N(int): degree
        z2(float): real z²
        sigma2(float): σ² > 0
        samples(int): total draws, >= 100
        seed(int): 64-bit seed
        workers(int): processes to use (1 runs in-process)
        streams(int): independent streams the samples are divided into

    Returns:
        McEstimate: mean, stderr, samples, seed
    """
    if samples < 100:
        raise DomainError(f"samples must be >= 100, got {samples}")
    if N > MC_N_SOFT_CAP:
        warnings.warn(f"Monte Carlo variance grows rapidly with N; N={N} exceeds {MC_N_SOFT_CAP}",
                      McVarianceWarning, stacklevel=2)
    z2 = float(z2)
    streams = max(1, min(streams, samples))
    children = np.random.SeedSequence(seed).spawn(streams)
    per_stream = [samples // streams + (1 if i < samples % streams else 0) for i in range(streams)]
    logger.debug("mc N=%d z2=%g sigma2=%g: %d samples over %d streams, %d workers",
                 N, z2, float(sigma2), samples, streams, workers)

    jobs = [(N, z2, sigma2, count, child) for count, child in zip(per_stream, children)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_partial_sums, *zip(*jobs)))
    else:
        parts = [_partial_sums(*job) for job in jobs]
    return merge_estimates(parts, seed)
