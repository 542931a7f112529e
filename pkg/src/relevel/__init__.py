"""History-driven logging level recommendation and rewriting for Java projects.

The public surface is intentionally small: `run` executes the whole pipeline
against a git repository, `RunConfig` holds every knob the CLI exposes, and
the framework profiles describe the logging APIs being analyzed.
"""

from .doi import InterestModel
from .errors import ConfigError, RelevelError, RepoError, RewriteError
from .heuristics import RunConfig, decide, find_mismatches, ideal_direction
from .pipeline import PipelineResult, run
from .profiles import JUL, SLF4J, FrameworkProfile, load_profiles
from .report import build_report, render_csv, render_json

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "FrameworkProfile",
    "InterestModel",
    "JUL",
    "PipelineResult",
    "RelevelError",
    "RepoError",
    "RewriteError",
    "RunConfig",
    "SLF4J",
    "build_report",
    "decide",
    "find_mismatches",
    "ideal_direction",
    "load_profiles",
    "render_csv",
    "render_json",
    "run",
]
