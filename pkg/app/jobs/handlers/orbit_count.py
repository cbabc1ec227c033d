from typing import Any, Dict

from app.core.models import OrderInput
from app.core.optimal_embed import count_orbits, enumerate_residue_embeddings
from app.core.orders import classify_residue_algebra
from app.core.runner import with_schema


async def run(ctx, inputs: Dict[str, Any]) -> Dict[str, Any]:
    """Orbit count of optimal embeddings modulo q^precision."""
    dokumen = OrderInput.model_validate(inputs)
    order = dokumen.to_order()
    daftar = enumerate_residue_embeddings(order, precision=dokumen.precision, guards=ctx.guards)
    hitung = count_orbits(daftar, order.ring.q, order.n, precision=dokumen.precision, guards=ctx.guards)
    kelas = classify_residue_algebra(order)

    if ctx.metrics:
        ctx.metrics.observe("orbit_sweep_candidates", len(daftar), {"q": str(order.ring.q), "n": str(order.n)})

    payload = hitung.to_payload()
    payload["injective_embeddings"] = sum(1 for e in daftar if e.injective)
    payload["residue_class"] = kelas.tag.value
    return with_schema(payload)
