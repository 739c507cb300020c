'''The module containing the exceptions raised by the toolkit.

The application layer maps each class to an exit status; see apps/sweeps.py.
'''


# ----------------------------------------------------------------------------

class ToolkitError(Exception):
    '''Root of every error raised on purpose by the toolkit.'''


class DomainError(ToolkitError, ValueError):
    '''An argument lies outside the domain of an operation.'''


class WindowError(DomainError):
    '''A parameter tuple violates the window of the estimate it was used with.

    window: Text of the violated window.
    '''

    def __init__(self, message: str, window: str = ""):
        super().__init__(f"{message} (window: {window})" if window else message)
        self.window = window


class AccuracyError(ToolkitError):
    '''An evaluation policy could not be met.'''


class DivergenceError(ToolkitError):
    '''A requested integral does not converge.'''


class TailToleranceError(ToolkitError):
    '''The bound on a truncated tail exceeds the tolerance.'''


class BudgetError(ToolkitError):
    '''Adaptive refinement or time-tail fitting ran out of budget.'''


class ToleranceError(ToolkitError):
    '''A cross-validation between two independent computations failed.

    report: The computed result that missed the comparison, when there is one.
    '''

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class WorkerError(ToolkitError):
    '''A worker process exited before it replied to its task.'''


class UsageError(ToolkitError):
    '''A run configuration or command line is invalid.'''


class ModeOverflowError(ToolkitError, OverflowError):
    '''An exact integer result does not fit the 64-bit integer width.'''


# ----------------------------------------------------------------------------

def require(condition: bool, message: str, error: type = DomainError):
    '''Raises error with message unless condition holds.'''
    if not condition:
        raise error(message)
