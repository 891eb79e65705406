"""stablerank-lab: compositional bounds for the four stable ranks (bsr,
tsr, csr, gsr) of Banach and C*-algebras, with citations and proof traces.

Typical use:

    from stablerank import dsl, model, rules, engine

    m = model.build_model(dsl.parse("algebra T = toeplitz\\nquery T\\n"))
    state = engine.propagate(rules.instantiate_rules(m), m)
    state.interval("T", lattice.RankKind.TSR)   # -> [2, 2]
"""
from . import lattice, dsl, catalog, model, topology, rules, engine, oracle, cli

__all__ = [
    "lattice",
    "dsl",
    "catalog",
    "model",
    "topology",
    "rules",
    "engine",
    "oracle",
    "cli",
]

__version__ = "0.1.0"
