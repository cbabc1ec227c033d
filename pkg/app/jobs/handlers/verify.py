from typing import Any, Dict

from app.core.errors import EXIT_NEGATIVE, EXIT_OK
from app.core.runner import with_schema
from app.core.verification import FAMILIES, SuiteSizes, run_suite


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    ukuran = SuiteSizes.from_settings()
    keluarga = tuple(inputs.get("families", FAMILIES)) if inputs else FAMILIES
    if inputs:
        ukuran = SuiteSizes(
            random_n3=int(inputs.get("random_n3", ukuran.random_n3)),
            orders=int(inputs.get("orders", ukuran.orders)),
            instances=int(inputs.get("instances", ukuran.instances)),
        )
    laporan = await run_suite(
        ctx.seed,
        guards=ctx.guards,
        sizes=ukuran,
        inject_mutant=ctx.config.inject_mutant,
        families=keluarga,
    )
    return with_schema(laporan.to_payload(), EXIT_OK if laporan.passed else EXIT_NEGATIVE)
