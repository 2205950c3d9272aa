"""Face shape regression and evaluation with UV position maps.

Thin Python front end over the C++ core. Arrays are NumPy float64; meshes and
position maps are opaque objects with array-valued properties.
"""

from ._core import (
    NUM_LANDMARKS,
    CorruptFileError,
    GeometryError,
    InvalidArgument,
    IoError,
    Mesh,
    ParseError,
    PositionMap,
    PrnModel,
    ShapeError,
    UvfaceError,
    UvIndexTable,
    augment,
    bake,
    bucket_by_yaw,
    build_mask,
    ced,
    generate_synthetic,
    icp,
    landmarks_from_map,
    load_mesh,
    load_model,
    load_sample,
    load_uv_index_table,
    load_uvpm,
    make_uv_index_table,
    nme_dense,
    nme_landmarks,
    recon_error,
    resample_error,
    save_mesh,
    save_uvpm,
    train_on_dataset,
    tutte_embed,
    unbake,
    uv_signed_areas,
    weighted_loss,
)

__version__ = "0.1.0"
__all__ = [name for name in dir() if not name.startswith("_")]
