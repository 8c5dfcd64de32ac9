"""Graph builder for the repro pipeline"""

from langgraph.graph import StateGraph, START, END

from graph.state import ReproState
from graph.nodes import (
    generate_node,
    train_node,
    predict_node,
    evaluate_node,
    acceptance_node,
    should_continue,
)

STAGES = ("generate", "train", "predict", "evaluate", "acceptance")


def create_graph():
    """Create and compile the repro graph: generate -> train -> predict -> evaluate -> acceptance"""
    builder = StateGraph(ReproState)

    builder.add_node("generate", generate_node)
    builder.add_node("train", train_node)
    builder.add_node("predict", predict_node)
    builder.add_node("evaluate", evaluate_node)
    builder.add_node("acceptance", acceptance_node)

    builder.add_edge(START, "generate")

    # A failed stage routes straight to END
    for stage, following in zip(STAGES, STAGES[1:]):
        builder.add_conditional_edges(
            stage,
            should_continue,
            {
                "continue": following,
                "end": END
            }
        )
    builder.add_edge("acceptance", END)

    return builder.compile()
