"""
Shared pydantic configuration for models carrying numpy payloads.
"""
from typing import Any

import numpy as np
import numpy.typing as npt
from pydantic import BaseModel, ConfigDict

ComplexMatrix4 = npt.NDArray[np.complex128]
RealArray = npt.NDArray[np.float64]
ComplexArray = npt.NDArray[np.complex128]


def readonly(array: Any, dtype: Any = None) -> np.ndarray:
    """Return a read-only copy of ``array`` so model payloads stay immutable."""
    out = np.array(array, dtype=dtype, copy=True)
    out.flags.writeable = False
    return out


class FrozenModel(BaseModel):
    """Immutable model that accepts numpy arrays as field values."""
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)
