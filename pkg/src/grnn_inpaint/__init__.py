"""Radial-band GRNN and LS-SVM inpainting for grayscale images."""

from .codec import load_image, read_image, save_image, write_image
from .engine import DamageRegion, InpaintReport, RegressorConfig, find_regions, inpaint
from .errors import (
    DecodeError,
    EmptyTrainingSetError,
    InpaintError,
    MaskGenerationError,
    ParameterError,
    ShapeMismatchError,
    TrainingError,
    UnfillableError,
)
from .experiment import (
    MaskSpec,
    SweepRecord,
    emit_bar_svg,
    emit_csv,
    emit_table,
    generate_mask,
    parse_csv,
    parse_mask_spec,
    radius_sweep,
)
from .grnn import GrnnModel, grnn_predict, grnn_predict_many, grnn_train
from .image import DamageMask, GrayImage, apply_mask, box_filter, mask_from_image
from .lssvm import (
    Kernel,
    LssvmModel,
    cd_inpaint,
    kernel_eval,
    lssvm_predict,
    lssvm_train,
    rc_inpaint,
    rd_inpaint,
    two_kernel_inpaint,
)
from .metrics import mse, psnr
from .radial import TrainingSet, band_radius, compute_band, select_training

__version__ = "0.1.0"
