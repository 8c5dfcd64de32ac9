"""Graph Visualization - Generate a Mermaid diagram of the repro pipeline"""

from config.settings import SEPARATOR_LENGTH
from graph.builder import create_graph


def repro_mermaid() -> str:
    """Mermaid source of the compiled repro graph"""
    return create_graph().get_graph().draw_mermaid()


def visualize_graph():
    """Print the repro graph in Mermaid format"""
    print("\n" + "=" * SEPARATOR_LENGTH)
    print("Repro Pipeline Graph (Mermaid)")
    print("=" * SEPARATOR_LENGTH)
    try:
        print("\n" + repro_mermaid())
        print("\n" + "=" * SEPARATOR_LENGTH)
        print("Copy the above code to https://mermaid.live to visualize the graph")
        print("=" * SEPARATOR_LENGTH + "\n")
    except Exception as e:
        print(f"Error generating Mermaid visualization: {e}")
        print("=" * SEPARATOR_LENGTH + "\n")


if __name__ == "__main__":
    visualize_graph()
