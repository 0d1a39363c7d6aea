"""How the PCA-split estimator's loss scales with n, d and the separation.

Runs reduced-size sweeps (40 replicates per point, a few seconds each) and
fits log-log slopes. The expected scalings are n^(-1/2), d^(+1/2) and
(lambda/sigma)^(-2) in the small-separation regime.
"""

from mixbench import ExperimentConfig, run_experiment


def show(res, label, expected):
    print(f"\n{label} (expected slope about {expected}):")
    for s in res.summary:
        print(f"  value = {s.axis_value:>8g}   mean loss = {s.mean_loss:.5f} +- {s.std_err:.5f}")
    lo, hi = res.slope_ci95
    print(f"  fitted slope = {res.fitted_slope:+.3f}   (95% CI [{lo:+.3f}, {hi:+.3f}])")


res = run_experiment(
    ExperimentConfig(
        estimator="dense_pca",
        n=1000,
        d=16,
        lam=0.8,
        replicates=40,
        master_seed=1,
        sweep_axis="n",
        sweep_values=(1000, 2000, 4000, 8000, 16000),
    ),
    threads=4,
)
show(res, "sweep over sample size n", "-1/2")

res = run_experiment(
    ExperimentConfig(
        estimator="dense_pca",
        n=20000,
        d=8,
        lam=0.8,
        replicates=40,
        master_seed=2,
        sweep_axis="d",
        sweep_values=(8, 16, 32, 64),
    ),
    threads=4,
)
show(res, "sweep over dimension d", "+1/2")

res = run_experiment(
    ExperimentConfig(
        estimator="dense_pca",
        n=20000,
        d=16,
        lam=0.4,
        replicates=40,
        master_seed=3,
        sweep_axis="lambda",
        sweep_values=(0.4, 0.566, 0.8, 1.131),
    ),
    threads=4,
)
show(res, "sweep over separation lambda", "-2")
