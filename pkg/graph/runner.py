"""Graph execution logic"""

from config.loader import config_fingerprint
from config.schema import ExperimentConfig
from config.settings import SEPARATOR_LENGTH
from graph.builder import create_graph
from graph.state import ReproState
from utils.errors import StageError
from utils.logging import get_logger

logger = get_logger(__name__)

EXIT_OK = 0
EXIT_ACCEPTANCE_FAILED = 2


def run_repro(config: ExperimentConfig, preset: str, graph=None) -> int:
    """Run the whole pipeline; 0 when every acceptance check passes, 2 otherwise

    A failed stage raises StageError carrying the stage name.
    """
    graph = graph or create_graph()
    fingerprint = config_fingerprint(config)
    initial_state: ReproState = {
        "preset": preset,
        "config": config,
        "fingerprint": fingerprint,
        "failed_stage": None,
        "error": None,
    }

    print("=" * SEPARATOR_LENGTH)
    print(f"repro {preset} (config {fingerprint}, out {config.paths.out_dir})")
    print("=" * SEPARATOR_LENGTH)
    logger.info(f"Starting repro preset {preset} with config {fingerprint}")

    state = graph.invoke(initial_state)

    if state.get("failed_stage"):
        raise StageError(state["failed_stage"], state.get("error") or "unknown failure")
    passed = bool(state.get("acceptance_passed"))
    print("=" * SEPARATOR_LENGTH)
    print("All acceptance checks passed" if passed else "Acceptance checks FAILED (see reports/acceptance.csv)")
    print("=" * SEPARATOR_LENGTH)
    return EXIT_OK if passed else EXIT_ACCEPTANCE_FAILED
