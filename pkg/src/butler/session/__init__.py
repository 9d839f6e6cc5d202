from .episodes import (
    ABLATIONS,
    Episode,
    EpisodeRunConfig,
    FixtureError,
    episode_rng,
    load_episode,
    replay_history,
    run_episode,
    store_personal_plan,
)
from .feedback import FEEDBACK_QUESTION, oracle_feedback
from .metrics import EpisodeResult, compute_metrics

__all__ = [
    "ABLATIONS",
    "Episode",
    "EpisodeResult",
    "EpisodeRunConfig",
    "FEEDBACK_QUESTION",
    "FixtureError",
    "compute_metrics",
    "episode_rng",
    "load_episode",
    "oracle_feedback",
    "replay_history",
    "run_episode",
    "store_personal_plan",
]
