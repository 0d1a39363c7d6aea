"""Monte-Carlo verification suites for the closed-form bounds.

Each suite returns a list of JSON-ready entries, one per checked instance,
with a boolean ``holds`` field. Empirical frequencies are compared against
bounds with a 3-standard-error margin; that margin is a verification-suite
convention, not part of the bounds themselves. All suites are deterministic
for a fixed seed.
"""

from __future__ import annotations

import math

import numpy as np

from .bounds import concentration_bound, kl_bound, kl_monte_carlo
from .errors import DomainError
from .estimators import davis_kahan_check, support_recovery_check
from .loss import loss_bounds_symmetric, loss_exact_linear
from .model import MixtureParams, bayes_classifier, make_rng, stream_seed
from .packing import fano_check, local_triangle_check, lower_bound_family

__all__ = [
    "SUITES",
    "run_suite",
    "suite_loss_sandwich",
    "suite_kl",
    "suite_concentration",
    "suite_fano",
    "suite_triangle",
    "suite_davis_kahan",
    "suite_support_recovery",
]

SANDWICH_XI_GRID = (0.05, 0.1, 0.2, 0.5, 1.0)
SANDWICH_BETA_GRID = (0.05, 0.1, 0.3, 0.6)


def _symmetric_pair(xi: float, beta: float, sigma: float = 1.0, d: int = 2, mu0=None):
    """Equal-SNR mixtures whose signal directions differ by angle beta."""
    if d < 2:
        raise DomainError("need d >= 2 to realize an angle")
    center = np.zeros(d) if mu0 is None else np.asarray(mu0, dtype=float)
    h = np.zeros(d)
    h[0] = xi * sigma
    hp = np.zeros(d)
    hp[0] = xi * sigma * math.cos(beta)
    hp[1] = xi * sigma * math.sin(beta)
    return (
        MixtureParams(center - h, center + h, sigma),
        MixtureParams(center - hp, center + hp, sigma),
    )


def suite_loss_sandwich(tol: float = 1e-8, margin: float = 1e-7) -> list[dict]:
    """Quadrature loss of each grid configuration against its closed form
    sandwich [2 g(xi) sin b cos b, tan(b)/pi]."""
    out = []
    for xi in SANDWICH_XI_GRID:
        for beta in SANDWICH_BETA_GRID:
            theta, theta_p = _symmetric_pair(xi, beta)
            value = loss_exact_linear(theta, bayes_classifier(theta_p), tol=tol).value
            lower, upper = loss_bounds_symmetric(xi, beta)
            holds = (lower - margin) <= value <= (upper + margin)
            out.append(
                {
                    "check": "loss_sandwich",
                    "xi": xi,
                    "beta": beta,
                    "lower": lower,
                    "loss": value,
                    "upper": upper,
                    "holds": holds,
                }
            )
    return out


def suite_kl(pairs: int = 200, n_samples: int = 100_000, seed: int = 20240) -> list[dict]:
    """Monte-Carlo KL of random equal-norm symmetric pairs (xi <= 0.5)
    against the closed-form bound xi^4 (1 - cos beta)."""
    rng = make_rng(seed)
    out = []
    for k in range(int(pairs)):
        d = int(rng.integers(2, 9))
        xi = float(rng.uniform(0.02, 0.5))
        beta = float(rng.uniform(0.0, math.pi / 2))
        sigma = float(rng.uniform(0.5, 2.0))
        mu0 = rng.normal(size=d)
        theta, theta_p = _symmetric_pair(xi, beta, sigma=sigma, d=d, mu0=mu0)
        est, se = kl_monte_carlo(theta, theta_p, n_samples=n_samples, seed=stream_seed(seed, k))
        bound = kl_bound(xi, math.cos(beta))
        out.append(
            {
                "check": "kl_dominance",
                "d": d,
                "xi": xi,
                "cos_beta": math.cos(beta),
                "estimate": est,
                "std_err": se,
                "bound": bound,
                "holds": est <= bound + 3.0 * se,
            }
        )
    return out


def _freq_entry(check: str, params: dict, freq: float, trials: int, bound: float) -> dict:
    se = math.sqrt(freq * (1.0 - freq) / trials)
    return {
        "check": check,
        **params,
        "frequency": freq,
        "trials": trials,
        "bound": bound,
        "holds": freq <= bound + 3.0 * se,
    }


def suite_concentration(trials: int = 100_000, seed: int = 77) -> list[dict]:
    """Empirical tail frequencies against the chi-square and product-normal
    bounds on the module's parameter grid."""
    out = []
    for i, d in enumerate((5, 50)):
        rng = make_rng(stream_seed(seed, i))
        x = rng.chisquare(d, size=trials)
        for eps in (0.1, 0.5, 1.0):
            freq = float(np.mean(x > (1.0 + eps) * d))
            out.append(_freq_entry("chisq_upper", {"d": d, "eps": eps}, freq, trials, concentration_bound("chisq_upper", d=d, eps=eps)))
        for eps in (0.1, 0.5):
            freq = float(np.mean(x < (1.0 - eps) * d))
            out.append(_freq_entry("chisq_lower", {"d": d, "eps": eps}, freq, trials, concentration_bound("chisq_lower", d=d, eps=eps)))
    for i, n in enumerate((50, 500)):
        rng = make_rng(stream_seed(seed, 100 + i))
        means = np.mean(rng.standard_normal((trials, n)) * rng.standard_normal((trials, n)), axis=1)
        for eps in (0.1, 0.5, 1.0):
            freq = float(np.mean(np.abs(means) > eps / 2.0))
            out.append(_freq_entry("prodnormal", {"n": n, "eps": eps}, freq, trials, concentration_bound("prodnormal", n=n, eps=eps)))
    return out


def _default_families(seed: int = 0):
    dense = lower_bound_family("dense", 10_000, 9, lam=0.2, sigma=1.0, seed=seed)
    sparse = lower_bound_family("sparse", 10_000, 17, s=4, lam=0.2, sigma=1.0, seed=seed)
    return [dense, sparse]


def suite_fano(families=None, kl_method: str = "bound") -> list[dict]:
    """KL budget and pairwise loss window of the lower-bound families."""
    if families is None:
        families = _default_families()
    out = []
    for fam in families:
        rep = fano_check(fam, kl_method=kl_method)
        entry = rep.to_json_dict()
        entry["check"] = "fano"
        entry["regime"] = fam.regime
        entry["holds"] = rep.holds and rep.window_holds
        out.append(entry)
    return out


def suite_triangle(seed: int = 0) -> list[dict]:
    """Local triangle inequality on family pairs and an identity case."""
    dense = _default_families(seed)[0]
    out = []
    theta0 = dense.thetas[0]
    ident = local_triangle_check(theta0, theta0, bayes_classifier(theta0))
    entry = ident.to_json_dict()
    entry.update({"check": "triangle_identity", "holds": bool(ident.applicable and ident.holds)})
    out.append(entry)
    clf0 = bayes_classifier(theta0)
    for i in range(1, dense.size):
        for j in range(dense.size):
            if i == j:
                continue
            rep = local_triangle_check(dense.thetas[i], dense.thetas[j], clf0)
            entry = rep.to_json_dict()
            entry.update(
                {
                    "check": "triangle_pair",
                    "i": i,
                    "j": j,
                    "holds": bool(rep.holds) if rep.applicable else True,  # vacuous when not applicable
                }
            )
            out.append(entry)
    return out


def suite_davis_kahan(instances: int = 1000, d_max: int = 10, seed: int = 4242) -> list[dict]:
    """Random admissible (a, e) pairs; the perturbation bound must hold on all."""
    rng = make_rng(seed)
    failures = 0
    worst_ratio = 0.0
    for _ in range(int(instances)):
        d = int(rng.integers(2, d_max + 1))
        q, _ = np.linalg.qr(rng.normal(size=(d, d)))
        evals = np.sort(rng.uniform(-1.0, 1.0, size=d))[::-1]
        evals[0] = evals[1] + rng.uniform(0.1, 2.0)  # enforce a usable gap
        a = (q * evals) @ q.T
        a = (a + a.T) / 2.0
        gap = evals[0] - evals[1]
        e = rng.normal(size=(d, d))
        e = (e + e.T) / 2.0
        e *= rng.uniform(0.05, 1.0) * (gap / 5.0) / np.linalg.norm(e, 2)
        rep = davis_kahan_check(a, e)
        if not rep.holds:
            failures += 1
        if rep.bound > 0:
            worst_ratio = max(worst_ratio, rep.sin_angle / rep.bound)
    return [
        {
            "check": "davis_kahan",
            "instances": int(instances),
            "failures": failures,
            "worst_ratio": worst_ratio,
            "holds": failures == 0,
        }
    ]


def suite_support_recovery(
    d: int = 256,
    n: int = 4000,
    strong_coords: int = 4,
    strength: float = 2.0,
    sigma: float = 1.0,
    replicates: int = 500,
    seed: int = 31,
) -> list[dict]:
    """Frequency of exact screening recovery against the 1 - 6/n floor."""
    h = np.zeros(d)
    h[:strong_coords] = strength * sigma
    theta = MixtureParams(-h, h, sigma)
    rep = support_recovery_check(theta, n, replicates, seed)
    se = math.sqrt(max(rep.floor * (1.0 - rep.floor), 0.0) / replicates)
    entry = rep.to_json_dict()
    entry["check"] = "support_recovery"
    entry["margin_3se"] = 3.0 * se
    entry["holds"] = rep.frequency >= rep.floor - 3.0 * se
    return [entry]


SUITES = {
    "loss-sandwich": suite_loss_sandwich,
    "kl": suite_kl,
    "concentration": suite_concentration,
    "fano": suite_fano,
    "triangle": suite_triangle,
    "davis-kahan": suite_davis_kahan,
    "support-recovery": suite_support_recovery,
}


def run_suite(name: str, **kwargs) -> list[dict]:
    if name not in SUITES:
        raise DomainError(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    return SUITES[name](**kwargs)
