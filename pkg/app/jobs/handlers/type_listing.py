from typing import Any, Dict

from app.core.models import InstanceInput
from app.core.runner import with_schema
from app.core.selectivity import type_distribution, type_group


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    """List every type with whether it admits an optimal embedding."""
    inst = InstanceInput.model_validate(inputs).to_instance()
    sebaran = type_distribution(inst, ctx.guards)
    return with_schema(
        {
            **type_group(inst).to_payload(),
            "types": [{"type": list(t.type_vector), "admits": t.admits} for t in sebaran],
            "admitting": sum(1 for t in sebaran if t.admits),
        }
    )
