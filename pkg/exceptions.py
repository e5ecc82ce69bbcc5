class AdGameError(Exception):
    """Base error; `exit_status` is the process exit status the CLI returns when it is raised."""

    exit_status = 2

    def __init__(self, detail: str, exit_status: int = None):
        super().__init__(detail)
        self.detail = detail
        if exit_status is not None:
            self.exit_status = exit_status


class GraphFormatError(AdGameError):
    pass


class DocumentFormatError(AdGameError):
    pass


class PreconditionError(AdGameError):
    pass


class SearchBoundExceeded(AdGameError):
    def __init__(self, what: str, size: int, bound: int):
        super().__init__(f"{what}: instance with {size} vertices exceeds exact-search bound {bound}")
        self.size = size
        self.bound = bound


class InvariantViolation(AdGameError):
    exit_status = 3
