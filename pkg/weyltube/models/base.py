"""Base models for weyltube scenarios and reports."""

from typing import Any, Dict

import orjson
from pydantic import BaseModel, ConfigDict


class TubeBaseModel(BaseModel):
    """Base model for all weyltube models with common configuration."""

    model_config = ConfigDict(
        # Allow population by field name or alias
        populate_by_name=True,
        # Use enum values instead of names
        use_enum_values=True,
        # Validate on assignment for better debugging
        validate_assignment=True,
        # Allow arbitrary types (numpy arrays, Fractions)
        arbitrary_types_allowed=True,
    )

    def to_json_bytes(self) -> bytes:
        """Deterministic JSON: sorted keys, shortest round-trip floats."""
        from ..utils.serialization import to_jsonable

        return orjson.dumps(
            to_jsonable(self.model_dump(mode="python")),
            option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2,
        )

    def to_dict(self) -> Dict[str, Any]:
        from ..utils.serialization import to_jsonable

        return to_jsonable(self.model_dump(mode="python"))
