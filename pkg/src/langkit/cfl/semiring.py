import re
from abc import ABC, abstractmethod
from typing import Any, Dict, Iterable, Optional, Type

Value = Any


class SemiringMismatch(ValueError):
    """Raised when two objects built over different semirings are combined"""

    def __init__(self, first: "Semiring", second: "Semiring"):
        super().__init__(f"Semiring mismatch: {first.name!r} vs {second.name!r}")
        self.first = first
        self.second = second


class Semiring(ABC):
    """Abstract commutative semiring ``(K, +, ·, 0, 1)``

    Semiring values are plain immutable Python objects, compared structurally.
    Subclasses register themselves under a short name with the ``semiring_name``
    class keyword, e.g. ``class MySemiring(Semiring, semiring_name="mine")``.
    """

    name: str = ""
    zero: Value = None
    one: Value = None
    idempotent: bool = False

    @abstractmethod
    def add(self, left: Value, right: Value) -> Value:
        raise NotImplementedError

    @abstractmethod
    def mul(self, left: Value, right: Value) -> Value:
        raise NotImplementedError

    @abstractmethod
    def coerce(self, value: Value) -> Value:
        """Convert ``value`` to an element of the carrier

        Raises :class:`ValueError` if ``value`` is not a valid element
        """
        raise NotImplementedError

    def eq(self, left: Value, right: Value) -> bool:
        return left == right

    def is_zero(self, value: Value) -> bool:
        return self.eq(value, self.zero)

    def sum(self, values: Iterable[Value]) -> Value:
        total = self.zero
        for value in values:
            total = self.add(total, value)
        return total

    def product(self, values: Iterable[Value]) -> Value:
        total = self.one
        for value in values:
            if self.is_zero(total):
                return self.zero
            total = self.mul(total, value)
        return total

    def parse(self, text: str) -> Value:
        """Parse a coefficient: ``0``, ``1`` or ``#k``

        >>> NATURAL.parse("#42")
        42
        >>> BOOLEAN.parse("1")
        True
        """
        m = re.fullmatch(r"#?(\d+)", text.strip())
        if m is None:
            raise ValueError(f"Invalid coefficient {text!r}")
        return self.coerce(int(m.group(1)))

    def format(self, value: Value) -> str:
        """Print a coefficient in decimal, Boolean values as 0/1"""
        return str(int(value))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Semiring) and type(self) is type(other)

    def __hash__(self) -> int:
        return hash(type(self))

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}()"

    _known_semirings: Dict[str, Type["Semiring"]] = {}

    @classmethod
    def _register_semiring(cls, name: str, class_: Type["Semiring"]):
        assert name not in cls._known_semirings
        cls._known_semirings[name] = class_

    @classmethod
    def __init_subclass__(cls, /, semiring_name: Optional[str] = None, **kwargs):
        super().__init_subclass__(**kwargs)
        if semiring_name is not None:
            cls.name = semiring_name
            Semiring._register_semiring(semiring_name, cls)

    @classmethod
    def from_name(cls, name: str) -> "Semiring":
        """Return the semiring registered as ``name`` (e.g. ``bool``, ``nat``)

        Raises :class:`ValueError` if the name is unknown
        """
        if name not in cls._known_semirings:
            raise ValueError(f"Unknown semiring {name!r}")
        return cls._known_semirings[name]()

    @classmethod
    def known_names(cls) -> list:
        return sorted(cls._known_semirings)


class BooleanSemiring(Semiring, semiring_name="bool"):
    """The Boolean semiring ``({0, 1}, ∨, ∧, 0, 1)``, values are :class:`bool`"""

    zero = False
    one = True
    idempotent = True

    def add(self, left: Value, right: Value) -> Value:
        return bool(left or right)

    def mul(self, left: Value, right: Value) -> Value:
        return bool(left and right)

    def coerce(self, value: Value) -> Value:
        if value in (0, 1):
            return bool(value)
        raise ValueError(f"Invalid Boolean value {value!r}")


class NaturalSemiring(Semiring, semiring_name="nat"):
    """The semiring of natural numbers, with arbitrary precision"""

    zero = 0
    one = 1

    def add(self, left: Value, right: Value) -> Value:
        return left + right

    def mul(self, left: Value, right: Value) -> Value:
        return left * right

    def coerce(self, value: Value) -> Value:
        if isinstance(value, bool) or not isinstance(value, int) or value < 0:
            raise ValueError(f"Invalid natural number {value!r}")
        return value


BOOLEAN = BooleanSemiring()
NATURAL = NaturalSemiring()


def embed_indicator(bit: bool, semiring: Semiring) -> Value:
    """Map a Boolean into ``semiring``: 1 to ``semiring.one``, 0 to ``semiring.zero``

    >>> embed_indicator(True, NATURAL)
    1
    >>> embed_indicator(False, NATURAL)
    0
    """
    return semiring.one if bit else semiring.zero


def check_same_semiring(first: Semiring, second: Semiring):
    if first != second:
        raise SemiringMismatch(first, second)
