from pauli.exceptions import InputError


class ManifestError(InputError):
    """Raised when a manifest is malformed, names an unknown key or fails validation."""
