from enum import Enum

class CurveShape(Enum):
    LEFT_SHOULDER = "left_shoulder"
    TRIANGLE = "triangle"
    RIGHT_SHOULDER = "right_shoulder"
