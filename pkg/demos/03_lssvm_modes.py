# %% [markdown]
# # The four LS-SVM baselines
#
# Row-wise, column-wise, their average, and one 2-D model. Horizontal
# scratches are hard for row models (whole rows vanish) but easy for columns.

# %%
import numpy as np

from grnn_inpaint import (Kernel, MaskSpec, RegressorConfig, apply_mask, datasets, generate_mask, inpaint,
                          lssvm_train, psnr)
from grnn_inpaint.lssvm import lssvm_predict_many

img = datasets.gaussian_blobs(40, 40, seed=2)
mask = generate_mask(MaskSpec("lines", seed=3, count=2, thickness=1), 40, 40)
damaged = apply_mask(img, mask)

# pixels on fully damaged lines are handed to the 2-D model ("fallback")
for method in ("rd", "cd", "rc", "lssvm2k"):
    rep = inpaint(damaged, mask, RegressorConfig(method=method))
    print(f"{method:8s} PSNR {psnr(img, rep.output):6.2f} dB, fallback pixels {len(rep.fallback)}")

# %% [markdown]
# A single 1-D fit: larger gamma pulls the curve through the samples.

# %%
x = np.arange(0, 20, 2.0)
y = np.sin(x / 3) * 100 + 120
for gamma in (1.0, 100.0, 1e4):
    m = lssvm_train(x, y, Kernel("rbf1d", 5.0), gamma)
    print(gamma, np.abs(lssvm_predict_many(m, x) - y).max().round(4))
