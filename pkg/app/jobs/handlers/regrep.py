from typing import Any, Dict

from app.core.errors import InvalidOrder
from app.core.models import OrderInput
from app.core.optimal_embed import is_optimal_minor, regular_representation
from app.core.runner import with_schema


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    order = OrderInput.model_validate(inputs).to_order()
    emb = regular_representation(order)
    optimal, saksi = is_optimal_minor(emb)
    if not optimal:
        raise InvalidOrder("regular representation failed the optimality check", saksi.to_payload())
    return with_schema(
        {
            "q": order.ring.q,
            "k": order.ring.k,
            "n": order.n,
            "matrices": [a.to_lists() for a in emb.matrices],
            "optimal": True,
            "witness": saksi.to_payload(),
        }
    )
