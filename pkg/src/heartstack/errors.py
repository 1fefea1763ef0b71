"""Exception hierarchy; each category maps to a CLI exit code."""


class HeartstackError(Exception):
    category = "internal"
    exit_code = 1


class ConfigError(HeartstackError):
    category = "config"
    exit_code = 2


class DataError(HeartstackError):
    category = "data"
    exit_code = 3


class SchemaMismatchError(HeartstackError):
    category = "schema"
    exit_code = 4


class ModelFormatError(HeartstackError):
    category = "model"
    exit_code = 5


class FitError(HeartstackError):
    category = "fit"
    exit_code = 6
