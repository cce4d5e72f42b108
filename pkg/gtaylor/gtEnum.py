"""
File containing all the enums used for PyGTaylor.
"""

from enum import Enum


class Direction(Enum):
    FORWARD = 1
    BACKWARD = -1
    BOTH = 0


class IntegratorMethod(Enum):
    RK45 = 0
    DOP853 = 1


class RemainderPath(Enum):
    ADJOINT = 0
    FORWARD = 1
    WRONSKIAN = 2
    AUTO = 3


class KernelSource(Enum):
    WRONSKIAN = 0
    ADJOINT = 1


class CheckStatus(Enum):
    PASS = 0
    FAIL = 1


class ExitCode(Enum):
    SUCCESS = 0
    VERIFY_FAILURE = 1
    INPUT_ERROR = 2
    NUMERICAL_FAILURE = 3
