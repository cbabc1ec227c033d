from typing import Any, Dict

from app.core.errors import EXIT_NEGATIVE, EXIT_OK
from app.core.models import EmbeddingInput
from app.core.optimal_embed import (
    is_optimal_independence,
    is_optimal_minor,
    is_optimal_oracle,
    quadratic_criterion,
)
from app.core.runner import with_schema


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    """Run every applicable optimality criterion and emit the verdict with its witness."""
    emb = EmbeddingInput.model_validate(inputs).to_embedding()

    kriteria = {"independence": is_optimal_independence(emb)}
    optimal, saksi = is_optimal_minor(emb)
    kriteria["minor"] = optimal
    kriteria["oracle"] = is_optimal_oracle(emb)
    if emb.n == 2:
        kriteria["quadratic"] = quadratic_criterion(emb)

    sepakat = len(set(kriteria.values())) == 1
    if not sepakat:
        ctx.logger.error("Optimality criteria disagree", extra={"criteria": kriteria})

    if ctx.metrics:
        ctx.metrics.increment("optimal_checks_total", {"optimal": str(optimal).lower()})

    payload = {
        "optimal": optimal,
        "witness": saksi.to_payload(),
        "witness_verified": saksi.verify(emb),
        "criteria": kriteria,
        "agreement": sepakat,
    }
    return with_schema(payload, EXIT_OK if optimal and sepakat else EXIT_NEGATIVE)
