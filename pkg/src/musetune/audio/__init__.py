from .clip import (
    MAX_CLIP_SECONDS,
    SUPPORTED_TARGET_RATES,
    AudioClip,
    CropPolicy,
    crop_clip,
    decode_and_normalize,
    save_clip,
)
from .resample import resample
from .wavio import read_wav, write_wav

__all__ = [
    "AudioClip",
    "CropPolicy",
    "MAX_CLIP_SECONDS",
    "SUPPORTED_TARGET_RATES",
    "crop_clip",
    "decode_and_normalize",
    "read_wav",
    "resample",
    "save_clip",
    "write_wav",
]
