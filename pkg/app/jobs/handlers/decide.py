from typing import Any, Dict

from app.core.models import InstanceInput
from app.core.runner import with_schema
from app.core.selectivity import decide_selectivity, global_embedding_count


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    inst = InstanceInput.model_validate(inputs).to_instance()
    laporan = decide_selectivity(inst, ctx.guards)

    if ctx.metrics:
        ctx.metrics.increment("selectivity_decisions_total", {"selective": str(laporan.selective).lower()})

    payload = laporan.to_payload()
    if inst.local_embedding_numbers:
        payload["global_embedding_count"] = global_embedding_count(inst).to_payload()
    return with_schema(payload)
