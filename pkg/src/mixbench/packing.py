"""Packing codes and the hypothesis families behind the minimax lower bounds.

A lower-bound family places 2^k-style collections of mixture parameters on a
sphere of radius lambda: each binary codeword perturbs the first d-1
coordinates of a base direction by +/- eps (dense) or by eps on its support
(sparse), with the last coordinate set to lambda_0 so that every member has
separation exactly lambda. Codewords with guaranteed pairwise Hamming
distance keep the members far apart in clustering loss while an eps cap
keeps their pairwise KL divergence inside the Fano budget.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bounds import kl_bound, kl_monte_carlo
from .errors import (
    BudgetExceeded,
    ConstructionFailed,
    DomainError,
    PreconditionViolated,
)
from .loss import g_function, loss_exact_linear
from .model import LinearClassifier, MixtureParams, bayes_classifier, make_rng, stream_seed

__all__ = [
    "BinaryCode",
    "PackingFamily",
    "FanoReport",
    "TriangleReport",
    "vg_code",
    "sparse_code",
    "lower_bound_family",
    "fano_check",
    "local_triangle_check",
    "family_to_json_dict",
    "family_from_json_dict",
]


@dataclass(frozen=True)
class BinaryCode:
    """A set of distinct binary words with a guaranteed pairwise distance.

    ``words`` is a (count, length) 0/1 array; ``weight`` is set when every
    word has that exact Hamming weight (constant-weight codes).
    """

    length: int
    words: np.ndarray
    min_distance: int
    weight: int | None = None

    def __post_init__(self):
        w = np.array(self.words, dtype=np.int8)
        if w.ndim != 2 or w.shape[1] != self.length:
            raise DomainError(f"words must be (count, {self.length}), got {w.shape}")
        w.setflags(write=False)
        object.__setattr__(self, "words", w)

    @property
    def count(self) -> int:
        return self.words.shape[0]

    def pairwise_distances(self) -> np.ndarray:
        """Exhaustive Hamming distance matrix (count x count)."""
        diff = self.words[:, None, :] != self.words[None, :, :]
        return diff.sum(axis=2)

    def verify(self) -> bool:
        """Exhaustively check the declared distance/weight invariants."""
        d = self.pairwise_distances()
        off = d[~np.eye(self.count, dtype=bool)]
        if off.size and int(off.min()) < self.min_distance:
            return False
        if np.unique(self.words, axis=0).shape[0] != self.count:
            return False
        if self.weight is not None and not np.all(self.words.sum(axis=1) == self.weight):
            return False
        return True


@dataclass(frozen=True)
class PackingFamily:
    """Hypothesis family theta_omega derived from a binary code."""

    thetas: tuple[MixtureParams, ...]
    code: BinaryCode
    epsilon: float
    lambda0: float
    gamma: float
    regime: str  # "dense" | "sparse"
    n: int
    d: int
    s: int | None
    lam: float
    sigma: float

    @property
    def size(self) -> int:
        return len(self.thetas)


@dataclass(frozen=True)
class FanoReport:
    """Certification that a family satisfies the testing-reduction budget."""

    alpha_fano: float
    holds: bool  # alpha_fano < 1/8
    max_kl: float
    log_m: float
    kl_method: str
    window_low: float
    window_high: float
    pair_losses: tuple[float, ...]
    window_holds: bool
    implied_lower_bound: float  # 0.07 * gamma

    def to_json_dict(self) -> dict:
        return {
            "alpha_fano": self.alpha_fano,
            "holds": self.holds,
            "max_kl": self.max_kl,
            "log_m": self.log_m,
            "kl_method": self.kl_method,
            "window_low": self.window_low,
            "window_high": self.window_high,
            "pair_losses": list(self.pair_losses),
            "window_holds": self.window_holds,
            "implied_lower_bound": self.implied_lower_bound,
        }


@dataclass(frozen=True)
class TriangleReport:
    """Outcome of the local triangle inequality check on one configuration."""

    applicable: bool
    lower: float
    upper: float
    observed: float
    holds: bool | None

    def to_json_dict(self) -> dict:
        return {
            "applicable": self.applicable,
            "lower": self.lower,
            "upper": self.upper,
            "observed": self.observed,
            "holds": self.holds,
        }


def _hamming(a: int, b: int) -> int:
    return (a ^ b).bit_count()


def _int_to_word(x: int, m: int) -> np.ndarray:
    return np.array([(x >> (m - 1 - i)) & 1 for i in range(m)], dtype=np.int8)


def vg_code(m: int) -> BinaryCode:
    """Greedy lexicographic code of length m with distance >= ceil(m/8).

    Starts from the all-zeros word and admits each subsequent word that keeps
    the minimum distance; stops once ceil(2^(m/8)) + 1 words are collected,
    the count the greedy argument guarantees for m >= 8. Enumeration is
    capped at m = 24.
    """
    m = int(m)
    if m < 8:
        raise PreconditionViolated(f"the construction requires m >= 8, got m = {m}")
    if m > 24:
        raise BudgetExceeded(f"enumeration budget is m <= 24, got m = {m}")
    dist = math.ceil(m / 8)
    target = math.ceil(2.0 ** (m / 8.0)) + 1
    admitted: list[int] = []
    for x in range(2**m):
        if all(_hamming(x, y) >= dist for y in admitted):
            admitted.append(x)
            if len(admitted) >= target:
                break
    if len(admitted) < target:  # cannot happen for 8 <= m <= 24
        raise ConstructionFailed(f"greedy enumeration found only {len(admitted)} of {target} words")
    words = np.stack([_int_to_word(x, m) for x in admitted])
    return BinaryCode(length=m, words=words, min_distance=dist)


def sparse_code(m: int, s: int, seed: int = 0, budget: int = 1_000_000) -> BinaryCode:
    """Randomized greedy constant-weight code: weight s, distance > s/2.

    Samples weight-s words uniformly and admits those far from everything
    admitted so far, until ceil((m/s)^(s/5)) words are collected. Requires
    s <= m/4; exhausting the budget raises ConstructionFailed (existence is
    guaranteed, so failure signals the budget, not the mathematics).
    """
    m, s = int(m), int(s)
    if s < 1 or s > m / 4:
        raise PreconditionViolated(f"requires 1 <= s <= m/4 = {m / 4:.6g}, got s = {s}")
    target = math.ceil(math.exp((s / 5.0) * math.log(m / s)))
    min_dist_exclusive = s / 2.0
    rng = make_rng(seed)
    admitted: list[np.ndarray] = []
    admitted_mat = np.zeros((0, m), dtype=np.int8)
    for _ in range(int(budget)):
        word = np.zeros(m, dtype=np.int8)
        word[rng.choice(m, size=s, replace=False)] = 1
        if admitted_mat.shape[0]:
            dists = np.sum(admitted_mat != word[None, :], axis=1)
            if int(dists.min()) <= min_dist_exclusive:
                continue
        admitted.append(word)
        admitted_mat = np.vstack([admitted_mat, word[None, :]])
        if len(admitted) >= target:
            break
    else:
        raise ConstructionFailed(f"budget of {budget} draws exhausted with {len(admitted)}/{target} words")
    # distances between equal-weight words are even, so > s/2 means >= the
    # next even integer
    declared = int(math.floor(min_dist_exclusive)) + 1
    if declared % 2 == 1:
        declared += 1
    return BinaryCode(length=m, words=admitted_mat, min_distance=declared, weight=s)


def _gamma_value(regime: str, xi: float, k_eff: float, eps: float, lam: float) -> float:
    if regime == "dense":
        return 0.25 * (g_function(xi) - 2.0 * xi**2) * math.sqrt(k_eff) * eps / lam
    return 0.25 * (g_function(xi) - math.sqrt(2.0) * xi**2) * math.sqrt(k_eff) * eps / lam


def lower_bound_family(
    regime: str,
    n: int,
    d: int,
    s: int | None = None,
    lam: float = 0.2,
    sigma: float = 1.0,
    seed: int = 0,
) -> PackingFamily:
    """Construct the hypothesis family used by the minimax lower bounds.

    dense:  eps = min( (sqrt(log 2)/3) (sigma^2/lambda) / sqrt(n),
                       lambda / (4 sqrt(d-1)) ),  codewords over {0,1}^(d-1)
            with signs 2w-1, lambda_0^2 = lambda^2 - (d-1) eps^2.
    sparse: eps = min( sqrt(8/45) (sigma^2/lambda) sqrt(log((d-1)/s)/n),
                       lambda / (2 sqrt(s)) ),  weight-s codewords,
            lambda_0^2 = lambda^2 - s eps^2. ``s`` is the construction's
            internal sparsity; members lie in the class with s + 1 relevant
            coordinates.

    Every member has separation exactly lambda by construction.
    """
    n, d = int(n), int(d)
    lam, sigma = float(lam), float(sigma)
    if lam <= 0.0 or sigma <= 0.0:
        raise DomainError("lambda and sigma must be positive")
    if n < 1:
        raise DomainError("n must be positive")
    xi = lam / (2.0 * sigma)

    if regime == "dense":
        if d < 9:
            raise PreconditionViolated(f"dense regime requires d >= 9, got d = {d}")
        eps = min(
            (math.sqrt(math.log(2.0)) / 3.0) * (sigma**2 / lam) / math.sqrt(n),
            lam / (4.0 * math.sqrt(d - 1.0)),
        )
        lambda0_sq = lam**2 - (d - 1) * eps**2
        assert lambda0_sq >= (15.0 / 16.0) * lam**2 - 1e-12  # eps cap guarantees this
        code = vg_code(d - 1)
        signs = 2.0 * code.words.astype(np.float64) - 1.0
        k_eff = float(d - 1)
        s_val = None
    elif regime == "sparse":
        if s is None:
            raise DomainError("sparse regime requires s")
        s = int(s)
        if not (4 <= s <= (d - 1) / 4.0):
            raise PreconditionViolated(f"sparse regime requires 4 <= s <= (d-1)/4 = {(d - 1) / 4.0:.6g}, got s = {s}")
        eps = min(
            math.sqrt(8.0 / 45.0) * (sigma**2 / lam) * math.sqrt(math.log((d - 1.0) / s) / n),
            0.5 * lam / math.sqrt(s),
        )
        lambda0_sq = lam**2 - s * eps**2
        assert lambda0_sq >= 0.75 * lam**2 - 1e-12
        code = sparse_code(d - 1, s, seed=seed)
        signs = code.words.astype(np.float64)
        k_eff = float(s)
        s_val = s
    else:
        raise DomainError(f"unknown regime {regime!r}")

    lambda0 = math.sqrt(lambda0_sq)
    thetas = []
    for row in signs:
        mu = np.zeros(d)
        mu[: d - 1] = row * eps
        mu[d - 1] = lambda0
        thetas.append(MixtureParams(-mu / 2.0, mu / 2.0, sigma))
    gamma = _gamma_value(regime, xi, k_eff, eps, lam)
    return PackingFamily(
        thetas=tuple(thetas),
        code=code,
        epsilon=eps,
        lambda0=lambda0,
        gamma=gamma,
        regime=regime,
        n=n,
        d=d,
        s=s_val,
        lam=lam,
        sigma=sigma,
    )


def _pair_cos_beta(t1: MixtureParams, t2: MixtureParams) -> float:
    mu1 = t1.mu2 - t1.mu1
    mu2 = t2.mu2 - t2.mu1
    c = float(abs(mu1 @ mu2) / (np.linalg.norm(mu1) * np.linalg.norm(mu2)))
    return min(c, 1.0)


def fano_check(
    family: PackingFamily,
    n: int | None = None,
    kl_method: str = "bound",
    mc_samples: int = 1_000_000,
    seed: int = 0,
    quad_tol: float = 1e-9,
) -> FanoReport:
    """Certify the family's KL budget and pairwise loss window.

    alpha_fano = n * max_i KL(P_i, P_0) / log M must stay below 1/8 for the
    testing reduction to apply; the loss of each member's optimal rule under
    every other member must land in the construction's bracket.
    """
    if kl_method not in ("bound", "monte_carlo"):
        raise DomainError(f"unknown kl_method {kl_method!r}")
    m_count = family.size - 1
    if m_count < 2:
        raise PreconditionViolated(f"the reduction requires M >= 2 hypotheses beyond the base, got M = {m_count}")
    n = family.n if n is None else int(n)
    xi = family.lam / (2.0 * family.sigma)

    theta0 = family.thetas[0]
    kls = []
    for i, theta_i in enumerate(family.thetas[1:], start=1):
        if kl_method == "bound":
            kls.append(kl_bound(xi, _pair_cos_beta(theta_i, theta0)))
        else:
            est, _ = kl_monte_carlo(theta_i, theta0, n_samples=mc_samples, seed=stream_seed(seed, i))
            kls.append(max(est, 0.0))
    max_kl = float(max(kls))
    log_m = math.log(m_count)
    alpha_fano = n * max_kl / log_m

    k_eff = float(family.d - 1) if family.regime == "dense" else float(family.s)
    scale = math.sqrt(k_eff) * family.epsilon / family.lam
    window_low = 0.5 * g_function(xi) * scale
    if family.regime == "dense":
        window_high = (4.0 / math.pi) * scale
    else:
        window_high = (2.0 * math.sqrt(2.0) / math.pi) * scale

    losses = []
    in_window = True
    for i in range(family.size):
        for j in range(i + 1, family.size):
            val = loss_exact_linear(family.thetas[i], bayes_classifier(family.thetas[j]), tol=quad_tol).value
            losses.append(val)
            if not (window_low - 10.0 * quad_tol <= val <= window_high + 10.0 * quad_tol):
                in_window = False
    return FanoReport(
        alpha_fano=alpha_fano,
        holds=alpha_fano < 1.0 / 8.0,
        max_kl=max_kl,
        log_m=log_m,
        kl_method=kl_method,
        window_low=window_low,
        window_high=window_high,
        pair_losses=tuple(losses),
        window_holds=in_window,
        implied_lower_bound=0.07 * family.gamma,
    )


def local_triangle_check(
    theta: MixtureParams,
    theta_prime: MixtureParams,
    clf: LinearClassifier,
    quad_tol: float = 1e-9,
) -> TriangleReport:
    """Check the loss window that substitutes for the triangle inequality.

    With tau = L_theta(clf) + sqrt(KL/2) (KL taken from the closed-form bound,
    which only widens the window), applicability requires
    L_theta(F_theta') + tau <= 1/2, and then L_theta'(clf) must land within
    L_theta(F_theta') +/- tau.
    """
    if theta.d != theta_prime.d:
        raise PreconditionViolated("the pair must share a dimension")
    if theta.sigma != theta_prime.sigma:
        raise PreconditionViolated("the pair must share sigma")
    if not np.allclose(theta.center, theta_prime.center, atol=1e-12):
        raise PreconditionViolated("the pair must share the center mu0")
    h1 = np.linalg.norm(theta.half_separation)
    h2 = np.linalg.norm(theta_prime.half_separation)
    if abs(h1 - h2) > 1e-12 * max(h1, h2, 1.0):
        raise PreconditionViolated("the pair must have equal separations")

    xi = float(h1) / theta.sigma
    kl = kl_bound(xi, _pair_cos_beta(theta, theta_prime))
    loss_cross = loss_exact_linear(theta, bayes_classifier(theta_prime), tol=quad_tol).value
    loss_clf = loss_exact_linear(theta, clf, tol=quad_tol).value
    tau = loss_clf + math.sqrt(kl / 2.0)
    applicable = loss_cross + tau <= 0.5
    observed = loss_exact_linear(theta_prime, clf, tol=quad_tol).value
    lower = loss_cross - tau
    upper = loss_cross + tau
    holds = None
    if applicable:
        slack = 10.0 * quad_tol
        holds = (lower - slack) <= observed <= (upper + slack)
    return TriangleReport(applicable=applicable, lower=lower, upper=upper, observed=observed, holds=holds)


def family_to_json_dict(family: PackingFamily) -> dict:
    return {
        "regime": family.regime,
        "n": family.n,
        "d": family.d,
        "s": family.s,
        "lambda": family.lam,
        "sigma": family.sigma,
        "epsilon": family.epsilon,
        "lambda0": family.lambda0,
        "gamma": family.gamma,
        "codewords": family.code.words.tolist(),
        "code_min_distance": family.code.min_distance,
        "code_weight": family.code.weight,
        "thetas": [t.to_json_dict() for t in family.thetas],
    }


def family_from_json_dict(obj: dict) -> PackingFamily:
    code = BinaryCode(
        length=len(obj["codewords"][0]),
        words=np.asarray(obj["codewords"], dtype=np.int8),
        min_distance=int(obj["code_min_distance"]),
        weight=obj.get("code_weight"),
    )
    thetas = tuple(MixtureParams.from_json_dict(t) for t in obj["thetas"])
    return PackingFamily(
        thetas=thetas,
        code=code,
        epsilon=float(obj["epsilon"]),
        lambda0=float(obj["lambda0"]),
        gamma=float(obj["gamma"]),
        regime=obj["regime"],
        n=int(obj["n"]),
        d=int(obj["d"]),
        s=obj.get("s"),
        lam=float(obj["lambda"]),
        sigma=float(obj["sigma"]),
    )
