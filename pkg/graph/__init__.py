"""LangGraph repro pipeline components"""

# Avoid circular imports - import only what's needed
from graph.state import ReproState
from graph.builder import create_graph, STAGES

__all__ = [
    "ReproState",
    "create_graph",
    "STAGES",
]
