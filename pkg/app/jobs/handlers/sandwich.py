from typing import Any, Dict

from app.core.abelian_groups import check_group_order
from app.core.models import InstanceInput
from app.core.runner import with_schema
from app.core.selectivity import check_consistency, sandwich_report


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    inst = InstanceInput.model_validate(inputs).to_instance()
    check_group_order(inst.class_group, ctx.guards)
    check_consistency(inst)
    return with_schema(sandwich_report(inst).to_payload())
