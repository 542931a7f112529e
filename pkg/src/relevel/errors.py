"""Error types shared across the package."""


class RelevelError(Exception):
    """Base class for fatal errors. The CLI maps these to exit code 1."""


class ConfigError(RelevelError):
    """Bad configuration: unknown level, unresolvable ref, malformed profile file."""


class RepoError(RelevelError):
    """Repository access failed: missing path, unreadable object."""


class RewriteError(RelevelError):
    """Planned source edits are inconsistent (overlap, stale span)."""
