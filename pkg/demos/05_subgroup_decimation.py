# %% [markdown]
# Sampling on a subgroup
#
# Keep samples only on every third cell. Over H = 3Z_12 the single generator splits into
# three (its shifts by 0, 1, 2 cells), so at least three sampling channels are needed.

# %%
import numpy as np

from usampling import GeneratorSet, coset_decompose, design, reconstruct, subgroup_lift
from usampling.errors import NotRecoverableError
from usampling.hmodels import average_samplers, hat, make_periodized_shift_model, sample, synthesize
from usampling.sampler import ungroup

rng = np.random.default_rng(4)
model = make_periodized_shift_model(12, 2)
phi = GeneratorSet(model, hat(24, 2))
D = coset_decompose(model.group, 3)
print("index L =", D.index, "coset representatives", D.representatives)

# %%
psi = average_samplers(model, rng.uniform(-1, 1, (4, 24)))
A_H, phi_H, psi_H = subgroup_lift(phi, psi, D)
kit = design(A_H, phi_H, samplers=psi_H)
x = rng.standard_normal((1, 12))
f = synthesize(phi, x)
x_H, f_rec = reconstruct(kit, sample(psi_H, f))
print("system over H:", A_H.shape, "error:", np.linalg.norm(f_rec - f) / np.linalg.norm(f))
print("coefficients back on Z_12 match:", np.allclose(ungroup(x_H, D), x))

# %%
# two channels cannot carry three generators
A2, phi2, _ = subgroup_lift(phi, average_samplers(model, rng.uniform(-1, 1, (2, 24))), D)
try:
    design(A2, phi2)
except NotRecoverableError as exc:
    print("refused, delta =", exc.delta)
