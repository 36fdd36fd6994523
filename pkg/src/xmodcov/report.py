from dataclasses import dataclass


@dataclass(frozen=True)
class Check:
    """Outcome of an axiom scan: ``ok``, or the first failure and its witness."""

    ok: bool
    failure: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok

    @classmethod
    def passed(cls):
        return cls(True)

    @classmethod
    def failed(cls, failure, *witness):
        return cls(False, failure, tuple(witness))

    def as_dict(self):
        return {"ok": self.ok, "failure": self.failure, "witness": list(self.witness)}
