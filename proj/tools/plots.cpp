#include "plots.hpp"

namespace clipopt::cli {

namespace {

const char* kCommonHeader = R"PY(#!/usr/bin/env python3
import csv
import math
import os

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

HERE = os.path.dirname(os.path.abspath(__file__))


def read_csv(name):
    rows = []
    with open(os.path.join(HERE, name)) as f:
        body = [line for line in f if not line.startswith("#")]
    for row in csv.DictReader(body):
        rows.append(row)
    return rows


def num(row, key):
    v = row[key]
    return float("nan") if v == "" else float(v)

)PY";

}  // namespace

std::string plot_biasvar_script() {
  return std::string(kCommonHeader) + R"PY(
rows = read_csv("biasvar.csv")
panels = sorted({(num(r, "alpha"), r["model"]) for r in rows})
fig, axes = plt.subplots(2, len(panels), figsize=(4 * len(panels), 7),
                         squeeze=False)
for j, (alpha, model) in enumerate(panels):
    sub = [r for r in rows
           if r["model"] == model and num(r, "alpha") == alpha]
    sub.sort(key=lambda r: num(r, "tau"))
    tau = [num(r, "tau") for r in sub]
    for i, (hat, bound, label) in enumerate([
            ("bias_hat", "bias_bound", "bias"),
            ("var_hat", "var_bound", "variance")]):
        ax = axes[i][j]
        ax.plot(tau, [num(r, hat) for r in sub], label=label)
        ax.plot(tau, [num(r, bound) for r in sub], "--", label="bound")
        ax.set_xlabel("tau")
        ax.set_yscale("log")
        ax.legend()
        if i == 0:
            ax.set_title(f"{model} (alpha={alpha:g})")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "biasvar.png"), dpi=150)
print("wrote biasvar.png")
)PY";
}

std::string plot_trajectory_script() {
  return std::string(kCommonHeader) + R"PY(
rows = read_csv("trajectory.csv")
it = [num(r, "iter") for r in rows]
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
ax1.plot(it, [num(r, "obj_x") for r in rows], label="F(x^k)")
obj_z = [(k, num(r, "obj_z")) for k, r in zip(it, rows)
         if not math.isnan(num(r, "obj_z"))]
if obj_z:
    ax1.plot([k for k, _ in obj_z], [v for _, v in obj_z], label="F(z^k)")
ax1.set_xlabel("iteration")
ax1.set_ylabel("objective")
ax1.legend()
resid = [(k, num(r, "resid")) for k, r in zip(it, rows)
         if not math.isnan(num(r, "resid"))]
ax2.plot([k for k, _ in resid], [v for _, v in resid])
ax2.set_xlabel("iteration")
ax2.set_ylabel("stationarity residual")
ax2.set_yscale("log")
fig.tight_layout()
fig.savefig(os.path.join(HERE, "trajectory.png"), dpi=150)
print("wrote trajectory.png")
)PY";
}

std::string plot_sweep_script() {
  return std::string(kCommonHeader) + R"PY(
rows = read_csv("summary.csv")
groups = sorted({(num(r, "alpha"), num(r, "eta0")) for r in rows})
fig, ax = plt.subplots(figsize=(7, 5))
for alpha, eta in groups:
    sub = [r for r in rows
           if num(r, "alpha") == alpha and num(r, "eta0") == eta]
    by_tau = {}
    for r in sub:
        by_tau.setdefault(num(r, "tau"), []).append(num(r, "best_obj"))
    tau = sorted(by_tau)
    med = [sorted(by_tau[t])[len(by_tau[t]) // 2] for t in tau]
    ax.plot(tau, med, marker="o", label=f"alpha={alpha:g}, eta={eta:g}")
ax.set_xlabel("tau")
ax.set_ylabel("best objective (median over seeds)")
ax.set_xscale("log")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "sweep.png"), dpi=150)
print("wrote sweep.png")
)PY";
}

std::string plot_bounds_script() {
  return std::string(kCommonHeader) + R"PY(
curve = read_csv("sigma_curve.csv")
bounds = read_csv("bounds.csv")
fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(11, 4))
ax1.loglog([num(r, "tau") for r in curve],
           [num(r, "sigma_sq") for r in curve])
ax1.set_xlabel("tau")
ax1.set_ylabel("sigma^2(tau)")
eps = [num(r, "eps") for r in bounds]
for col in ("K_convex", "K_scvx", "K_ncvx"):
    k = [num(r, col) for r in bounds]
    if all(math.isnan(v) for v in k):
        continue
    ax2.loglog(eps, k, marker="o", label=col)
ax2.set_xlabel("eps")
ax2.set_ylabel("iteration bound")
ax2.legend()
fig.tight_layout()
fig.savefig(os.path.join(HERE, "bounds.png"), dpi=150)
print("wrote bounds.png")
)PY";
}

}  // namespace clipopt::cli
