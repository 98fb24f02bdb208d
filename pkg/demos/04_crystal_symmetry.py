# %% [markdown]
# A space with quarter-turn symmetry
#
# On a 16 x 16 torus (4 x 4 cells of 4 x 4 samples) the space is spanned by all translates
# and rotations of one bump. Rotating the bump four ways turns the problem into an ordinary
# four-generator problem over Z_4 x Z_4.

# %%
import numpy as np

from usampling import crystal_generators, cyclic_rotations, design_from, make_crystallographic_model, reconstruct
from usampling.hmodels import average_samplers, bump2d, sample, synthesize

model = make_crystallographic_model(4, 4, cyclic_rotations(4))
phi = crystal_generators(model, bump2d(16, (1.5, 0.7), 1.0))
print("generators after reduction:", phi.N)

# %%
# five averagers per cell, against four generators: M >= N is necessary
centres = [(0.5, 0.3), (1.7, 0.2), (0.4, 2.1), (2.6, 2.9), (3.1, 1.3)]
psi = average_samplers(model, np.stack([bump2d(16, c, 0.8) for c in centres]))
kit = design_from(phi, psi)
print(f"delta_A={kit.report.delta:.2f}, riesz lower bound {phi.riesz.alpha:.3f}")

# %%
f = synthesize(phi, np.random.default_rng(3).standard_normal((4, 16)))
_, f_rec = reconstruct(kit, sample(psi, f))
print("error:", np.linalg.norm(f_rec - f) / np.linalg.norm(f))
print(np.round(f_rec.real.reshape(16, 16)[:6, :6], 2))
