"""
The vectors f_n and how fast h_n approaches h'_n
================================================

At q = 3 and level M = 3 the test vectors f_n exist for n = 1, 2.  We build
them from prescribed Levi data, confirm they are Hecke eigenvectors, and read
off the p-adic valuations of h_n - h'_n, which grow like n * v_p(gamma).
"""

from psverify.density import DensityConfig, build_fn, check_density_hypotheses, check_fn
from psverify.suites import density_fixture

fixture = density_fixture(3, 1)
cfg = DensityConfig(fixture.chis, level=3)
print(f"gamma = q / eta_2(p) = {cfg.gamma}, v_p(gamma) = {cfg.gamma_val}, n in {cfg.n_range}")
print(f"the auxiliary g takes values {sorted(set(cfg.g.values))} and integrates to {cfg.g.integral()}")

# f_1 is assembled orbit by orbit from its Levi data; every cell table is a closed form.
f1 = build_fn(1, cfg)
for rec in check_fn(cfg, 1, f1, cfg.eigenspace):
    print(f"  {rec.check:26s} {rec.status}")

# The full report: h_n vs h'_n, the decay constant r_1 and the Steinberg functional.
report = check_density_hypotheses(cfg, seed=0)
print("fitted r_1:", report.r1)
print("min valuation of h_n - h'_n per n:", report.sup_valuations)
for rec in report.records[-4:]:
    print(f"  {rec.check:30s} {rec.status}  {rec.measured or ''}")
