from enum import Enum

class RejectionReason(Enum):
    TOO_YOUNG = "too_young"
    TOO_OLD = "too_old"
    UNDERWEIGHT = "underweight"
