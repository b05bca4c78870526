# %% [markdown]
# # Masks, files and PSNR
#
# Seeded masks are reproducible; images round-trip through PGM and PNG.

# %%
import numpy as np

from grnn_inpaint import GrayImage, MaskSpec, generate_mask, load_image, mse, psnr, save_image

for spec in (MaskSpec("scatter", seed=7, fraction=0.05),
             MaskSpec("blocks", seed=7, count=3, block_w=6, block_h=4),
             MaskSpec("lines", seed=7, count=2, thickness=2)):
    m = generate_mask(spec, 32, 32)
    assert m == generate_mask(spec, 32, 32)
    print(spec.kind, m.n_damaged, "damaged pixels")

# %%
a = GrayImage(np.full((4, 4), 100))
b = GrayImage(np.full((4, 4), 102))
print("MSE", mse(a, b), "PSNR", round(psnr(a, b), 4))

# %%
assert load_image(save_image(a, "png")) == a
assert load_image(save_image(a, "pgm")) == a
