from typing import Any, Dict

from app.core.models import OrderInput
from app.core.optimal_embed import AlgebraKind, local_embedding_number
from app.core.runner import with_schema


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    dokumen = OrderInput.model_validate(inputs)
    jenis = AlgebraKind.DIVISION if ctx.config.division else AlgebraKind.MATRIX
    hasil = local_embedding_number(
        dokumen.to_order(),
        jenis,
        integrally_closed=ctx.config.integrally_closed,
        precision=dokumen.precision,
        guards=ctx.guards,
    )
    return with_schema(hasil.to_payload())
