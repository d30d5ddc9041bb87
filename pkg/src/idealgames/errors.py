"""Exception hierarchy shared by every module."""


class IdealGamesError(Exception):
    """Base class. ``exit_code`` is what the CLI returns for it."""

    exit_code = 2

    def to_json(self):
        return {"error": type(self).__name__, "message": str(self)}


class InputError(IdealGamesError, ValueError):
    pass


class StructuralError(IdealGamesError):
    """An object violates an invariant it was promised to satisfy."""


class ContractError(IdealGamesError):
    """An operation was called outside its precondition."""


class ConstructionError(IdealGamesError):
    """A builder could not realize its object within the given bounds."""

    def __init__(self, message, **details):
        super().__init__(message)
        self.details = details

    def to_json(self):
        out = super().to_json()
        out.update({k: _jsonable(v) for k, v in self.details.items()})
        return out


class SchemaError(IdealGamesError):
    def __init__(self, message, pointer=""):
        super().__init__(f"{pointer or '/'}: {message}")
        self.pointer = pointer

    def to_json(self):
        out = super().to_json()
        out["pointer"] = self.pointer
        return out


class ResourceError(IdealGamesError):
    """A search exceeded its node budget. Never silently truncated."""

    exit_code = 3

    def __init__(self, message, budget=None):
        super().__init__(message)
        self.budget = budget


def _jsonable(v):
    if isinstance(v, (frozenset, set)):
        return sorted(v, key=repr)
    if isinstance(v, tuple):
        return [_jsonable(x) for x in v]
    return v
