"""Exception hierarchy shared by all modules.

Every error raised on purpose by this package derives from
:class:`PhotonDopError`, and carries an ``exit_code`` used by the CLI.
"""


class PhotonDopError(Exception):
    exit_code = 1


class ConfigError(PhotonDopError, ValueError):
    """Invalid parameter or configuration value."""


class ParseError(ConfigError):
    """Malformed JSON configuration text."""

    def __init__(self, msg: str, line: int, column: int):
        super().__init__(f"{msg} (line {line}, column {column})")
        self.line = line
        self.column = column


class ShapeError(ConfigError):
    """Operands have incompatible dimensions."""


class LabelError(ConfigError, KeyError):
    """A subsystem label is not present in a layout."""

    def __str__(self):
        return Exception.__str__(self)


class LabelCollision(ConfigError):
    """Two tensor factors share a label."""


class ScheduleError(ConfigError):
    """A time schedule does not match the time factor of a state."""


class StateNameError(ConfigError, KeyError):
    """Unknown named polarization state."""

    def __str__(self):
        return Exception.__str__(self)


class NumericalError(PhotonDopError, ArithmeticError):
    exit_code = 2


class IoError(PhotonDopError, OSError):
    exit_code = 3
