"""Exception hierarchy shared by every module."""


class DiscordLabError(ValueError):
    """Base class for all errors raised by discord_lab."""


class DomainError(DiscordLabError):
    """A parameter lies outside its allowed range."""


class NonPositiveMatrix(DiscordLabError):
    pass


class ComplexEigenvalue(DiscordLabError):
    pass


class NotStandardForm(DiscordLabError):
    def __init__(self, message, index=None, value=None):
        super().__init__(message)
        self.index = index
        self.value = value


class UnphysicalSqueezer(DiscordLabError):
    pass


class SingularMatrix(DiscordLabError):
    pass


class FactorizationFailure(DiscordLabError):
    pass


class InsufficientData(DiscordLabError):
    pass


class DegenerateBootstrap(DiscordLabError):
    pass


class ConfigError(DiscordLabError):
    """Invalid scenario configuration. ``field`` names the offending entry."""

    def __init__(self, message, field=None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field
