class UnlawfulActionError(ValueError):
    """A sender picked a phase index outside its sender set."""


class DecodeAmbiguityError(RuntimeError):
    """The received state does not match exactly one codeword."""
