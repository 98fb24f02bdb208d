# %% [markdown]
# Average sampling in a shift-invariant space
#
# Eight unit cells, four grid samples per cell. The space is spanned by shifts of a hat
# function; we measure local averages over two boxes half a cell apart.

# %%
import numpy as np

from usampling import GeneratorSet, design_from, reconstruct, riesz_check
from usampling.hmodels import average_samplers, box, hat, make_periodized_shift_model, sample, synthesize

s, q = 8, 4
model = make_periodized_shift_model(s, q)
phi = GeneratorSet(model, hat(s * q, q))
psi = average_samplers(model, np.stack([box(s * q, 0, q), box(s * q, 2, q)]))

print("riesz bounds of the hat translates:", riesz_check(phi).alpha, riesz_check(phi).beta)

# %%
kit = design_from(phi, psi)
print(f"delta_A={kit.report.delta:.3f} alpha_A={kit.report.alpha:.3f} beta_A={kit.report.beta:.3f}")
print("noise amplification 1/alpha_A:", kit.noise_amplification)

# %%
rng = np.random.default_rng(1)
f = synthesize(phi, rng.standard_normal((1, s)))
samples = sample(psi, f)  # two averages per cell
x, f_rec = reconstruct(kit, samples)
print("reconstruction error:", np.linalg.norm(f_rec - f) / np.linalg.norm(f))

# the two reconstruction functions S_m, one per averager
print(np.round(kit.S.real, 3))
