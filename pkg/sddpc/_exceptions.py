class DDPCError(Exception):
    pass


class RejectedInputError(DDPCError, ValueError):
    pass


class InsufficientDataError(DDPCError):
    pass


class SingularOracleError(DDPCError):
    pass


class MissingDependencyError(DDPCError):
    pass


class IllConditionedError(DDPCError):
    def __init__(self, message, condition_numbers=None):
        super().__init__(message)
        self.condition_numbers = {} if condition_numbers is None else condition_numbers


class EstimatorError(DDPCError):
    pass


class StepError(DDPCError):
    def __init__(self, message, status=None):
        super().__init__(message)
        self.status = status


class ConfigError(DDPCError):
    def __init__(self, message, lineno=None, filename=None):
        prefix = ""
        if filename is not None:
            prefix = f"{filename}:"
            if lineno is not None:
                prefix += f"{lineno}:"
            prefix += " "
        super().__init__(prefix + message)
        self.lineno = lineno
        self.filename = filename
