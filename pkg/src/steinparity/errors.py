"""Exception hierarchy.

Two families matter to callers (and to the CLI exit codes):

* ``InvalidInput`` -- the data handed in is malformed or violates a
  precondition (exit code 1).
* ``InternalConsistencyError`` -- a check that holds for every valid input
  has failed, which means a bug in this package (exit code 2).
"""


class InvalidInput(ValueError):
    """Input data is malformed or outside the supported domain."""

    kind = "InvalidInput"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def report(self):
        return {"error": self.kind, "message": str(self), **self.details}


class NotTwoIntegral(InvalidInput):
    kind = "NotTwoIntegral"


class NotPrimitiveLattice(InvalidInput):
    kind = "NotPrimitiveLattice"


class IndexOutOfRange(InvalidInput):
    kind = "IndexOutOfRange"


class MultiplicityZero(InvalidInput):
    kind = "MultiplicityZero"


class InfiniteMultiplicity(InvalidInput):
    kind = "InfiniteMultiplicity"


class InvalidGraph(InvalidInput):
    kind = "InvalidGraph"


class NotThreeValent(InvalidGraph):
    kind = "NotThreeValent"


class UnbalancedVertex(InvalidGraph):
    kind = "UnbalancedVertex"


class PrimitiveEdgePresent(InvalidInput):
    kind = "PrimitiveEdgePresent"


class DissectionError(InvalidInput):
    kind = "DissectionError"


class NotBalancedPolygon(DissectionError):
    kind = "NotBalancedPolygon"


class CoverageMismatch(DissectionError):
    kind = "CoverageMismatch"


class AreaMismatch(DissectionError):
    kind = "AreaMismatch"


class OrientationConflict(DissectionError):
    kind = "OrientationConflict"


class InternalConsistencyError(RuntimeError):
    """A mathematically guaranteed property failed on a concrete instance."""

    kind = "InternalConsistencyError"

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def report(self):
        return {"error": self.kind, "message": str(self), **self.details}


class AuditFailure(InternalConsistencyError):
    kind = "AuditFailure"


class CycleStructureViolation(InternalConsistencyError):
    kind = "CycleStructureViolation"


class IncomparableLattices(InternalConsistencyError):
    kind = "IncomparableLattices"
