"""
Singleton metaclass used by the computational services.
"""
from typing import Any, ClassVar, Dict


class Singleton(type):
    """Singleton metaclass for service classes.

    The first call constructs the instance; later calls return it regardless of
    arguments, so collaborators are only injected once.
    """
    _instances: ClassVar[Dict[type, object]] = {}

    def __call__(cls, *args: Any, **kwargs: Any) -> Any:
        if cls not in cls._instances:
            cls._instances[cls] = super().__call__(*args, **kwargs)
        return cls._instances[cls]

    @classmethod
    def reset(mcs) -> None:
        """Forget every constructed service (used between test cases)."""
        mcs._instances.clear()
