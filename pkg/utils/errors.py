"""Exceptions raised by the alignment toolkit"""

from typing import Optional


class MNAError(ValueError):
    """Base class for invalid-input errors in the toolkit"""


class EdgeListError(MNAError):
    """Edge-list file could not be parsed"""

    def __init__(self, message: str, path: Optional[str] = None, line_number: Optional[int] = None):
        self.path = path
        self.line_number = line_number
        location = ""
        if path is not None:
            location = f"{path}"
            if line_number is not None:
                location += f":{line_number}"
            location += ": "
        super().__init__(f"{location}{message}")


class DegenerateTensorError(MNAError):
    """Every rank-1 term of the alignment tensor is identically zero"""


class AlignmentError(MNAError):
    """Alignment is malformed or cannot be produced"""
