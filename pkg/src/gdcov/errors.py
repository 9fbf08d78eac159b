"""Exception hierarchy. Each class carries a machine-readable ``kind``."""


class GdcovError(Exception):
    kind = "error"


class ParameterError(GdcovError, ValueError):
    kind = "parameter_out_of_range"


class DimensionError(GdcovError, ValueError):
    kind = "dimension_mismatch"


class InputError(GdcovError, ValueError):
    kind = "invalid_input"


class DegenerateSampleError(GdcovError, ValueError):
    kind = "degenerate_sample"


class NumericalError(GdcovError, ArithmeticError):
    kind = "numerical_failure"
