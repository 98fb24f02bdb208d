# %% [markdown]
# Pointwise samples of a linear spline
#
# Reading f at offsets 0 and 2 of each cell is grid decimation. Two readings per cell
# oversample a one-generator space, so there are many duals.

# %%
import numpy as np

from usampling import GeneratorSet, design_from, reconstruct
from usampling.hmodels import boundedness_check, hat, make_periodized_shift_model, pointwise_samplers, sample, synthesize

model = make_periodized_shift_model(8, 4)
phi = GeneratorSet(model, hat(32, 4))
points = pointwise_samplers(model, [0, 2])
print("sup_t sum_g |U(g)phi(t)|^2 =", boundedness_check(phi))

# %%
f = synthesize(phi, np.random.default_rng(2).standard_normal((1, 8)))
L = sample(points, f)
print("decimation:", np.array_equal(L, np.stack([f[0::4], f[2::4]])))

kit = design_from(phi, points)
_, f_rec = reconstruct(kit, L)
print("error:", np.linalg.norm(f_rec - f) / np.linalg.norm(f))
print("A_hat* A_hat ranges over", kit.report.alpha, "to", kit.report.beta)
