# %% [markdown]
# Convolution systems on a finite abelian group
#
# A system A maps N signals on G to M signals by matrix-valued convolution.
# Everything about it lives in its transfer field A_hat(xi), one M x N matrix per character.

# %%
import numpy as np

from usampling import ConvMatrix, convolve, frame_analysis, left_inverse, make_group
from usampling.frames import extremal_bundle, is_dual_pair, random_bounded_field
from usampling.sampler import instability_witness
from usampling.spectral import norm2

rng = np.random.default_rng(0)
G = make_group([2, 4])  # Z_2 x Z_4, eight elements
A = ConvMatrix(G, rng.standard_normal((3, 2, 8)) + 1j * rng.standard_normal((3, 2, 8)))
print("transfer field:", A.transfer.matrices.shape)

# %%
# frame bounds are the extreme eigenvalues of A_hat* A_hat over all characters
r = frame_analysis(A)
print(f"alpha={r.alpha:.4f} beta={r.beta:.4f} delta={r.delta:.4f} frame={r.is_frame}")

x, lam = extremal_bundle(A, "lower")
print("lower bound attained:", norm2(convolve(A, x)) / norm2(x), lam)

# %%
# every left inverse B_hat = A_hat^+ + C (I - A_hat A_hat^+) is a dual; C = 0 has the smallest norm
B0 = left_inverse(A)
B1 = left_inverse(A, random_bounded_field(G, 2, 3, rng))
print("dual pair deviations:", is_dual_pair(A, B0)[1], is_dual_pair(A, B1)[1])

# %%
# when delta_A vanishes nothing can be recovered, and there is a bundle that A nearly kills
bad = ConvMatrix(make_group([2]), [[[1.0, 1.0]]])
x, ratio = instability_witness(bad)
print("delta:", frame_analysis(bad).delta, "witness ratio:", ratio)
