from .curve_shape import CurveShape
from .iclassifier import IClassifier
from .imembership_curve import IMembershipCurve
from .imodel_store import IModelStore
from .iquery_engine import IQueryEngine
from .iregistry_store import IRegistryStore
from .rejection_reason import RejectionReason
from .token_kind import TokenKind
from .verdict import Verdict


__all__ = [
    "CurveShape",
    "IClassifier",
    "IMembershipCurve",
    "IModelStore",
    "IQueryEngine",
    "IRegistryStore",
    "RejectionReason",
    "TokenKind",
    "Verdict",
]
