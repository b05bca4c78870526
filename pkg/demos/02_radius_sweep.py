# %% [markdown]
# # Sweeping the band radius
#
# Four random block masks, GRNN at every odd radius from 3 to 13, plus the
# LS-SVM baselines once each. Writes a CSV, a pivot table and a bar chart.

# %%
from pathlib import Path

from grnn_inpaint import MaskSpec, datasets, emit_bar_svg, emit_csv, emit_table, generate_mask, radius_sweep

out = Path("sweep_out")
out.mkdir(exist_ok=True)
img = datasets.radial_gradient(64, 64)

records = []
for seed in range(4):
    mask = generate_mask(MaskSpec("blocks", seed=seed, count=4, block_w=5, block_h=5), 64, 64)
    records += radius_sweep(img, mask, ["grnn", "rd", "cd", "rc", "lssvm2k"],
                            image_id="radial", mask_id=f"SB{seed + 1}")

# %%
(out / "sweep.csv").write_bytes(emit_csv(records))
(out / "table.csv").write_bytes(emit_table(records))
(out / "grnn.svg").write_bytes(emit_bar_svg([r for r in records if r.method == "GRNN"]))
print(emit_table(records).decode())
