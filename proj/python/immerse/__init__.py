"""Clique immersions in K_{s,t}-free graphs via robust sublinear expanders."""

from ._immerse import (
    Graph,
    GraphError,
    Immersion,
    adversarial_neighborhood,
    certify,
    corpus,
    describe,
    embed,
    extract,
    find_kst,
    generate,
    greedy_baseline,
    oracle,
    rho,
    run_benchmark,
    verify,
)

__all__ = [
    "Graph",
    "GraphError",
    "Immersion",
    "adversarial_neighborhood",
    "certify",
    "corpus",
    "describe",
    "embed",
    "extract",
    "find_kst",
    "generate",
    "greedy_baseline",
    "oracle",
    "rho",
    "run_benchmark",
    "verify",
]
