import os
from dataclasses import dataclass, replace
from typing import Optional

from dotenv import load_dotenv

load_dotenv()


@dataclass
class Settings:
    # Randomized suites
    SEED: int = int(os.getenv("SELECTIS_SEED", 20240611))

    # Size guards for exhaustive sweeps
    MAX_Q: int = int(os.getenv("SELECTIS_MAX_Q", 5))
    MAX_N: int = int(os.getenv("SELECTIS_MAX_N", 3))
    MAX_K: int = int(os.getenv("SELECTIS_MAX_K", 2))
    MAX_GROUP_ORDER: int = int(os.getenv("SELECTIS_MAX_GROUP_ORDER", 2**32))
    MAX_SWEEP: int = int(os.getenv("SELECTIS_MAX_SWEEP", 20000))

    # Output
    JSON_INDENT: int = int(os.getenv("SELECTIS_JSON_INDENT", 2))
    LOG_LEVEL: str = os.getenv("SELECTIS_LOG_LEVEL", "INFO")

    # Runner
    RUN_TIMEOUT_SEC: int = int(os.getenv("SELECTIS_RUN_TIMEOUT_SEC", 600))

    # Verify suite sizes
    VERIFY_RANDOM_N3: int = int(os.getenv("SELECTIS_VERIFY_RANDOM_N3", 1000))
    VERIFY_ORDERS: int = int(os.getenv("SELECTIS_VERIFY_ORDERS", 500))
    VERIFY_INSTANCES: int = int(os.getenv("SELECTIS_VERIFY_INSTANCES", 200))


@dataclass(frozen=True)
class SizeGuards:
    max_q: int = 5
    max_n: int = 3
    max_k: int = 2
    max_group_order: int = 2**32
    max_sweep: int = 20000

    @classmethod
    def from_settings(cls, source: Optional[Settings] = None) -> "SizeGuards":
        sumber = source or settings
        return cls(
            max_q=sumber.MAX_Q,
            max_n=sumber.MAX_N,
            max_k=sumber.MAX_K,
            max_group_order=sumber.MAX_GROUP_ORDER,
            max_sweep=sumber.MAX_SWEEP,
        )

    def override(
        self,
        max_q: Optional[int] = None,
        max_n: Optional[int] = None,
        max_k: Optional[int] = None,
        max_group_order: Optional[int] = None,
    ) -> "SizeGuards":
        """Return a copy with the CLI overrides applied."""
        perubahan = {}
        if max_q is not None:
            perubahan["max_q"] = max_q
        if max_n is not None:
            perubahan["max_n"] = max_n
        if max_k is not None:
            perubahan["max_k"] = max_k
        if max_group_order is not None:
            perubahan["max_group_order"] = max_group_order
        return replace(self, **perubahan)


settings = Settings()
default_guards = SizeGuards.from_settings(settings)
