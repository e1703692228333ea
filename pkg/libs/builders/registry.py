"""Named surfaces for the command line."""

import re
from typing import Optional

from libs.surface import TranslationSurface

from .bouw_moller import bouw_moller
from .ngon import regular_ngon, square_torus

_NGON = re.compile(r"^ngon(\d+)$")
_BOUW_MOLLER = re.compile(r"^bm-(\d+)-(\d+)(-raw)?$")


def surface_by_name(name: str) -> Optional[TranslationSurface]:
    """Build ``torus``, ``ngon<N>`` or ``bm-<M>-<N>[-raw]``; None for other names."""
    key = name.strip().lower()
    if key == "torus":
        return square_torus()
    match = _NGON.match(key)
    if match:
        return regular_ngon(int(match.group(1)))
    match = _BOUW_MOLLER.match(key)
    if match:
        return bouw_moller(
            int(match.group(1)), int(match.group(2)), normalized=not match.group(3)
        )
    return None
