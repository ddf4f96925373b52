from enum import Enum

class Verdict(Enum):
    ELIGIBLE = "eligible"
    INELIGIBLE = "ineligible"
