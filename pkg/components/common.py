"""
Helpers shared by the command modules.
"""

from pathlib import Path
from typing import Any, Dict, List

from utils.core.config_loader import RunConfig, load_config
from utils.core.errors import DomainError
from utils.export_service import RunManifest


def load_run_config(args, **overrides: Any) -> RunConfig:
    """Config file with command-line overrides applied (None values ignored)."""
    return load_config(args.config, overrides)


def start_manifest(args, config: RunConfig) -> RunManifest:
    Path(args.out).mkdir(parents=True, exist_ok=True)
    return RunManifest(
        command=args.command,
        output_dir=str(args.out),
        config_path=config.source,
        parameters=config.echo(),
    )


def csv_header(config: RunConfig, **extra: Any) -> Dict[str, Any]:
    header = dict(config.echo())
    header.update(extra)
    return header


def parse_n_list(spec: str) -> List[int]:
    """'0,2,3' or '0-4' (or a mix) → sorted unique branch indices."""
    values = set()
    for part in (p.strip() for p in spec.split(",")):
        if not part:
            continue
        try:
            if "-" in part:
                low, high = (int(x) for x in part.split("-", 1))
                values.update(range(low, high + 1))
            else:
                values.add(int(part))
        except ValueError:
            raise DomainError(f"branch list must look like 0,1,2 or 0-4, got {spec!r}") from None
    if not values:
        raise DomainError("branch list is empty")
    if min(values) < 0:
        raise DomainError(f"branch indices must be non-negative, got {spec!r}")
    return sorted(values)
