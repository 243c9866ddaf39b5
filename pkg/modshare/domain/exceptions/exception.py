# modshare/domain/exceptions/exception.py
from typing import TYPE_CHECKING, List, Optional

if TYPE_CHECKING:
    from modshare.domain.models.placement import PlacementTrace


class ModshareException(Exception):
    """Base exception for every modshare error"""
    exit_code = 1


class ConfigException(ModshareException):
    """Invalid or unsupported configuration"""
    pass


class ScenarioException(ModshareException):
    """Errors loading or validating a scenario"""
    pass


class ScenarioSyntaxException(ScenarioException):
    """Malformed scenario document"""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, column {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class ScenarioSchemaException(ScenarioException):
    """Missing, unknown or out-of-range fields"""
    pass


class ScenarioReferenceException(ScenarioException):
    """An id refers to nothing in the scenario"""

    def __init__(self, message: str, violations: Optional[List] = None):
        self.violations = violations or []
        super().__init__(message)


class ScenarioValidationException(ScenarioException):
    """The scenario parsed but breaks cross-type invariants"""

    def __init__(self, violations: List):
        self.violations = violations
        summary = "; ".join(v.message for v in violations[:5])
        more = f" (+{len(violations) - 5} more)" if len(violations) > 5 else ""
        super().__init__(f"Invalid scenario: {summary}{more}")


class FunctionKeyConflictException(ScenarioException):
    """Two modules share a function key but disagree on what the module is"""

    def __init__(self, function_key: str):
        self.function_key = function_key
        super().__init__(f"Modules with function key '{function_key}' disagree on kind, memory or output size")


class MissingLinkException(ModshareException):
    """No network link between two distinct devices"""

    def __init__(self, src: str, dst: str):
        self.src = src
        self.dst = dst
        super().__init__(f"No network link from '{src}' to '{dst}'")


class RouteInvalidException(ModshareException):
    """A route does not match the placement or the request's model"""
    pass


class GenerationFailedException(ModshareException):
    """Instance generator ran out of retries"""
    pass


class InfeasibleException(ModshareException):
    """Base for infeasibility outcomes"""
    exit_code = 2


class PlacementInfeasibleException(InfeasibleException):
    """No device can host a module"""

    def __init__(self, function_key: Optional[str] = None, message: Optional[str] = None,
                 trace: Optional["PlacementTrace"] = None):
        self.function_key = function_key
        # greedy steps up to and including the failing module
        self.trace = trace
        if message is None:
            message = f"No device can host module '{function_key}'"
        super().__init__(message)


class ModuleUnplacedException(InfeasibleException):
    """A request needs a module that no device hosts"""

    def __init__(self, function_key: str):
        self.function_key = function_key
        super().__init__(f"Module '{function_key}' is not placed on any device")


class CapacityExhaustedException(InfeasibleException):
    """Every host of a module has used up its request capacity"""

    def __init__(self, function_key: str, request_id: str):
        self.function_key = function_key
        self.request_id = request_id
        super().__init__(f"Capacity of module '{function_key}' exhausted while routing request '{request_id}'")


class SearchSpaceTooLargeException(ModshareException):
    """Brute-force enumeration guard exceeded"""
    exit_code = 3

    def __init__(self, size: int, limit: int):
        self.size = size
        self.limit = limit
        super().__init__(f"Search space of {size} candidates exceeds the limit of {limit}")
