"""Exception types shared across the package."""


class ConfigError(ValueError):
    """Malformed registry/oracle configuration or bad command input."""


class ResourceLimitError(RuntimeError):
    """A request exceeds what the registry or stage budget can cover.

    `required_stages`, when set, is the smallest stage count that would
    satisfy the request.
    """

    def __init__(self, message: str, required_stages: int | None = None):
        super().__init__(message)
        self.required_stages = required_stages
