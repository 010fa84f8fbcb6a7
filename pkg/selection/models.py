from dataclasses import dataclass
from pathlib import Path


@dataclass(frozen=True)
class RunConfig:
    """Everything one ``select`` run needs; built from validated command options."""
    data_path: Path
    schema_path: Path
    prior: str = 'hierarchical'
    hyper: str = 'robust'
    out: Path = None
    format: str = 'json'
    top_n: int = 10
    baseline_demo: str = None
    prior_audit: bool = False
    delimiter: str = 'comma'
    jobs: int = 1
