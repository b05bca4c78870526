# %% [markdown]
# # Filling one scratch with GRNN
#
# We damage a small block of a synthetic image, look at the ring of known
# pixels that supplies the training data, and fill the block.

# %%
import numpy as np

from grnn_inpaint import DamageMask, RegressorConfig, apply_mask, compute_band, datasets, inpaint, psnr

img = datasets.gaussian_blobs(48, 48, seed=1)
known = np.ones(img.shape, bool)
known[20:24, 18:25] = False
mask = DamageMask(known)
damaged = apply_mask(img, mask)

# %% [markdown]
# The training band holds the known pixels within R//2 (Chebyshev) of the damage.

# %%
for R in (3, 5, 9):
    print(f"R={R}: {compute_band(mask, R).sum()} training pixels")

# %%
report = inpaint(damaged, mask, RegressorConfig(method="grnn", radius=5, sigma=2.0))
print("zero-filled PSNR :", round(psnr(img, damaged), 2))
print("inpainted PSNR   :", round(psnr(img, report.output), 2))
print(report.output.pixels[19:25, 17:26])
