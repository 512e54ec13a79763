from quartic_iso.config.settings import (
    BoundsConfig,
    RunConfig,
    load_bounds_config,
    resolve_workers,
)

__all__ = ["BoundsConfig", "RunConfig", "load_bounds_config", "resolve_workers"]
