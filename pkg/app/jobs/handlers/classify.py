from typing import Any, Dict

from app.core.models import OrderInput
from app.core.orders import classify_residue_algebra, validate
from app.core.runner import with_schema


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    order = OrderInput.model_validate(inputs).to_order()
    return with_schema(
        {
            "validation": validate(order).to_payload(),
            **classify_residue_algebra(order).to_payload(),
        }
    )
