class BaseLaverError(Exception):
    pass


class SizeLimitExceeded(BaseLaverError):
    pass


class DomainError(BaseLaverError, ValueError):
    pass


class TableFormatError(BaseLaverError):
    pass


class ContractError(BaseLaverError):
    pass


class BraidParseError(BaseLaverError):
    pass


class UnknownSuite(BaseLaverError):
    pass


class ConfigError(BaseLaverError):
    pass
