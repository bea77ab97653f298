"""Bundled case-study data: 27 routes rated on six QoS metrics, the criteria
with their value constraints, and the published intermediate/final tables.
Also a four-node diamond topology with matching criteria for ``paths``."""

from importlib import resources
from pathlib import Path

NAMES = (
    "table1.csv",
    "table2.json",
    "expected_table3.csv",
    "expected_table4.csv",
    "expected_table5.csv",
    "diamond_topology.json",
    "diamond_criteria.json",
)


def fixture_path(name: str) -> Path:
    if name not in NAMES:
        raise KeyError(f"unknown fixture {name!r}; available: {', '.join(NAMES)}")
    return Path(str(resources.files(__name__).joinpath(name)))
