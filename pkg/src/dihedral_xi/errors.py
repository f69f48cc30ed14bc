"""Exception hierarchy shared by every stage of the engine."""

from typing import Any, Dict


class XiError(Exception):
    """Base error. ``code`` is the machine-readable tag used in error records."""

    code = "xi-error"

    def __init__(self, message: str, **details: Any) -> None:
        super().__init__(message)
        self.message = message
        self.details = details

    def to_record(self) -> Dict[str, Any]:
        record: Dict[str, Any] = {"error": self.code, "message": self.message}
        if self.details:
            record["details"] = {k: str(v) for k, v in self.details.items()}
        return record


class SceneError(XiError):
    code = "scene"


class ColoringError(XiError):
    code = "coloring"


class SeifertError(XiError):
    code = "seifert"


class SignatureError(XiError):
    code = "signature"


class CoverError(XiError):
    code = "cover"


class LiftError(CoverError):
    code = "lift"


class LinkingError(XiError):
    code = "linking"


class NotRationalHomologySphereError(LinkingError):
    code = "not-rational-homology-sphere"


class ProviderError(XiError):
    code = "provider"
