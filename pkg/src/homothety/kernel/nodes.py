"""Immutable expression nodes.

Nodes are plain value objects: structural equality, cached hashes and a
deterministic total order (node-kind rank first, then children, then
symbol names).  Whether a tree is in canonical form is decided by the
constructors in :mod:`homothety.kernel.canon`, never by the nodes.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable

FUNCTIONS = ("exp", "ln", "sin", "cos", "tan", "cot", "csc")

_RANK = {
    "integer": 0,
    "rational": 1,
    "symbol": 2,
    "power": 3,
    "exp": 4,
    "ln": 5,
    "sin": 6,
    "cos": 7,
    "tan": 8,
    "cot": 9,
    "csc": 10,
    "product": 11,
    "sum": 12,
    "negate": 13,
}


class Expr:
    __slots__ = ("_hash", "_key", "_free")

    kind: str = "?"

    def __init__(self) -> None:
        self._hash: int | None = None
        self._key: tuple | None = None
        self._free: frozenset | None = None

    # -- structure -------------------------------------------------------
    @property
    def children(self) -> tuple[Expr, ...]:
        return ()

    def _payload(self) -> tuple:
        raise NotImplementedError

    def sort_key(self) -> tuple:
        if self._key is None:
            self._key = (_RANK[self.kind],) + self._payload()
        return self._key

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.kind,) + self._hash_payload())
        return self._hash

    def _hash_payload(self) -> tuple:
        return self.children

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Expr) or self.kind != other.kind:
            return False
        if hash(self) != hash(other):
            return False
        return self._same(other)

    def __ne__(self, other: object) -> bool:
        return not self.__eq__(other)

    def _same(self, other: Expr) -> bool:
        return self.children == other.children

    def __lt__(self, other: Expr) -> bool:
        return self.sort_key() < other.sort_key()

    @property
    def free_symbols(self) -> frozenset[Symbol]:
        if self._free is None:
            acc: frozenset = frozenset()
            for c in self.children:
                acc = acc | c.free_symbols
            self._free = acc
        return self._free

    def has(self, name: str) -> bool:
        """True if a symbol called ``name`` (or depending on it) occurs."""
        return any(s.name == name or name in s.depends for s in self.free_symbols)

    @property
    def is_zero_literal(self) -> bool:
        return isinstance(self, Num) and self.value == 0

    # -- arithmetic sugar: always returns canonical results ---------------
    def __add__(self, other):
        from .canon import add
        return add(self, as_expr(other))

    def __radd__(self, other):
        from .canon import add
        return add(as_expr(other), self)

    def __sub__(self, other):
        from .canon import add, mul
        return add(self, mul(MINUS_ONE, as_expr(other)))

    def __rsub__(self, other):
        from .canon import add, mul
        return add(as_expr(other), mul(MINUS_ONE, self))

    def __mul__(self, other):
        from .canon import mul
        return mul(self, as_expr(other))

    def __rmul__(self, other):
        from .canon import mul
        return mul(as_expr(other), self)

    def __truediv__(self, other):
        from .canon import mul, power
        return mul(self, power(as_expr(other), MINUS_ONE))

    def __rtruediv__(self, other):
        from .canon import mul, power
        return mul(as_expr(other), power(self, MINUS_ONE))

    def __pow__(self, other):
        from .canon import power
        return power(self, as_expr(other))

    def __neg__(self):
        from .canon import mul
        return mul(MINUS_ONE, self)

    def __repr__(self) -> str:
        from .parse import render
        return f"Expr({render(self)!r})"

    def __str__(self) -> str:
        from .parse import render
        return render(self)


class Num(Expr):
    __slots__ = ("value",)

    def __init__(self, value: int | Fraction) -> None:
        super().__init__()
        self.value = Fraction(value)

    @property
    def kind(self) -> str:  # type: ignore[override]
        return "integer" if self.value.denominator == 1 else "rational"

    def _payload(self) -> tuple:
        return (self.value,)

    def _hash_payload(self) -> tuple:
        return (self.value,)

    def _same(self, other: Expr) -> bool:
        return self.value == other.value  # type: ignore[attr-defined]

    @property
    def free_symbols(self) -> frozenset:
        return frozenset()

    @property
    def is_integer(self) -> bool:
        return self.value.denominator == 1


class Symbol(Expr):
    """A named symbol.

    ``depends`` lists the coordinates an undetermined function such as
    nu(t, r) varies with; ``derivs`` is the sorted multiset of coordinates
    it has been differentiated by.  Plain parameters have both empty.
    """

    __slots__ = ("name", "depends", "derivs")
    kind = "symbol"

    def __init__(self, name: str, depends: Iterable[str] = (), derivs: Iterable[str] = ()) -> None:
        super().__init__()
        self.name = name
        self.depends = tuple(depends)
        self.derivs = tuple(sorted(derivs))

    @property
    def label(self) -> str:
        if not self.derivs:
            return self.name
        return self.name + "__" + "_".join(self.derivs)

    def _payload(self) -> tuple:
        return (self.name, self.derivs, self.depends)

    def _hash_payload(self) -> tuple:
        return (self.name, self.derivs, self.depends)

    def _same(self, other: Expr) -> bool:
        return (self.name, self.derivs, self.depends) == (
            other.name, other.derivs, other.depends)  # type: ignore[attr-defined]

    @property
    def free_symbols(self) -> frozenset:
        if self._free is None:
            self._free = frozenset((self,))
        return self._free


class Sum(Expr):
    __slots__ = ("args",)
    kind = "sum"

    def __init__(self, args: Iterable[Expr]) -> None:
        super().__init__()
        self.args = tuple(args)

    @property
    def children(self) -> tuple[Expr, ...]:
        return self.args

    def _payload(self) -> tuple:
        return (len(self.args),) + tuple(a.sort_key() for a in self.args)


class Product(Expr):
    __slots__ = ("args",)
    kind = "product"

    def __init__(self, args: Iterable[Expr]) -> None:
        super().__init__()
        self.args = tuple(args)

    @property
    def children(self) -> tuple[Expr, ...]:
        return self.args

    def _payload(self) -> tuple:
        return (len(self.args),) + tuple(a.sort_key() for a in self.args)


class Power(Expr):
    __slots__ = ("base", "exp")
    kind = "power"

    def __init__(self, base: Expr, exp: Expr) -> None:
        super().__init__()
        self.base = base
        self.exp = exp

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.base, self.exp)

    def _payload(self) -> tuple:
        return (self.base.sort_key(), self.exp.sort_key())


class Func(Expr):
    __slots__ = ("name", "arg")

    def __init__(self, name: str, arg: Expr) -> None:
        super().__init__()
        if name not in FUNCTIONS:
            raise ValueError(f"unknown function {name!r}")
        self.name = name
        self.arg = arg

    @property
    def kind(self) -> str:  # type: ignore[override]
        return self.name

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _payload(self) -> tuple:
        return (self.arg.sort_key(),)


class Negate(Expr):
    __slots__ = ("arg",)
    kind = "negate"

    def __init__(self, arg: Expr) -> None:
        super().__init__()
        self.arg = arg

    @property
    def children(self) -> tuple[Expr, ...]:
        return (self.arg,)

    def _payload(self) -> tuple:
        return (self.arg.sort_key(),)


ZERO = Num(0)
ONE = Num(1)
MINUS_ONE = Num(-1)
HALF = Num(Fraction(1, 2))
TWO = Num(2)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    if isinstance(value, (int, Fraction)):
        return Num(value)
    if isinstance(value, str):
        from .canon import simplify
        from .parse import parse
        return simplify(parse(value))
    raise TypeError(f"cannot convert {type(value).__name__} to an expression")


def sym(name: str, depends: Iterable[str] = ()) -> Symbol:
    return Symbol(name, depends)
