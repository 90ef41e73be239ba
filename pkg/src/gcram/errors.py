"""Exception types shared across the compiler."""


class GcramError(Exception):
    """Base class for all tool errors."""


class TechFileError(GcramError):
    """Technology file is missing, unparsable, or fails schema checks."""


class InvariantError(GcramError):
    """A loaded model violates a physical or structural invariant."""


class UnknownVariantError(GcramError):
    """Requested bitcell variant is not defined in the technology."""


class ConfigError(GcramError):
    """Macro configuration violates its invariants."""


class VariantError(GcramError):
    """Operation applied to the wrong bitcell variant."""


class SpiceSyntaxError(GcramError):
    """Netlist text cannot be parsed."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ConnectivityError(GcramError):
    """Emission refused because the netlist fails connectivity checks."""


class RequirementError(GcramError):
    """Workload requirement profile is malformed."""


class InfeasibleError(GcramError):
    """No technology satisfies a requirement bin."""

    def __init__(self, message, task_id=None, bin_index=None, constraint=None):
        super().__init__(message)
        self.task_id = task_id
        self.bin_index = bin_index
        self.constraint = constraint
