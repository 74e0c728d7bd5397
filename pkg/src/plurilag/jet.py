"""Canonical differential functions over a jet space.

An :class:`Expr` is a polynomial with rational coefficients in jet variables
``u^a_I`` and in the atoms ``sin(u^a)``, ``cos(u^a)``.  Every instance is kept
in a canonical form:

* monomials are keyed by a sorted tuple of ``(atom, power)`` pairs,
* zero coefficients are dropped,
* ``cos(u)**2`` is rewritten to ``1 - sin(u)**2`` eagerly, so ``cos`` only
  ever appears to the first power.

Equality of canonical forms is therefore equality of differential functions
on this class, which is what makes every identity check in the package exact.

Atoms are plain tuples so they sort cheaply::

    (dep, 0, order, idx)   jet variable u^dep_idx
    (dep, 1)               sin(u^dep)
    (dep, 2)               cos(u^dep)

Sorting by these keys gives dependent-index-major, graded-lexicographic order.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Callable, Iterable, NamedTuple

from .errors import ContextError, UnsupportedOperation

JET, SIN, COS = 0, 1, 2

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9]*\Z")
_RESERVED = {"sin", "cos", "D"}


@dataclass(frozen=True)
class Context:
    """Names of the independent and dependent variables."""

    indep: tuple[str, ...]
    dep: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "indep", tuple(self.indep))
        object.__setattr__(self, "dep", tuple(self.dep))
        names = self.indep + self.dep
        if not self.indep or not self.dep:
            raise ContextError("context needs at least one independent and one dependent variable")
        if len(set(names)) != len(names):
            raise ContextError(f"duplicate variable names in {names}")
        for n in names:
            if not _NAME_RE.match(n) or n in _RESERVED:
                raise ContextError(f"invalid variable name {n!r}")

    @property
    def p(self) -> int:
        return len(self.indep)

    @property
    def q(self) -> int:
        return len(self.dep)

    def indep_index(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            try:
                return self.indep.index(name_or_index)
            except ValueError:
                raise ContextError(f"unknown independent variable {name_or_index!r}") from None
        if not 0 <= name_or_index < self.p:
            raise ContextError(f"independent-variable index {name_or_index} out of range")
        return name_or_index

    def dep_index(self, name_or_index) -> int:
        if isinstance(name_or_index, str):
            try:
                return self.dep.index(name_or_index)
            except ValueError:
                raise ContextError(f"unknown dependent variable {name_or_index!r}") from None
        if not 0 <= name_or_index < self.q:
            raise ContextError(f"dependent-variable index {name_or_index} out of range")
        return name_or_index

    def multi_index(self, spec="") -> tuple[int, ...]:
        """Multi-index from a string of independent names (``"xxy"``) or a sequence of counts."""
        if isinstance(spec, str):
            counts = [0] * self.p
            for ch in spec:
                counts[self.indep_index(ch)] += 1
            return tuple(counts)
        counts = tuple(int(c) for c in spec)
        if len(counts) != self.p or any(c < 0 for c in counts):
            raise ContextError(f"bad multi-index {spec!r} for {self.p} independent variables")
        return counts

    def unit(self, j: int) -> tuple[int, ...]:
        j = self.indep_index(j)
        return tuple(1 if k == j else 0 for k in range(self.p))

    def jet(self, dep=0, spec="") -> "Expr":
        return Expr.jet(self, self.dep_index(dep), self.multi_index(spec))

    def sin(self, dep=0) -> "Expr":
        return Expr.atom(self, (self.dep_index(dep), SIN))

    def cos(self, dep=0) -> "Expr":
        return Expr.atom(self, (self.dep_index(dep), COS))

    def const(self, c) -> "Expr":
        return Expr.const(self, c)


class JetVar(NamedTuple):
    """Dependent-variable index plus multi-index of derivative counts."""

    dep: int
    idx: tuple[int, ...]

    @property
    def order(self) -> int:
        return sum(self.idx)

    @property
    def atom(self) -> tuple:
        return (self.dep, JET, sum(self.idx), tuple(self.idx))


def mi_add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def mi_sub(a, b):
    if any(x < y for x, y in zip(a, b)):
        raise ValueError(f"multi-index {a} is not >= {b}")
    return tuple(x - y for x, y in zip(a, b))


def mi_ge(a, b) -> bool:
    return all(x >= y for x, y in zip(a, b))


def mi_key(a):
    """Graded-lexicographic sort key."""
    return (sum(a), tuple(a))


def jet_atom(dep: int, idx) -> tuple:
    idx = tuple(idx)
    return (dep, JET, sum(idx), idx)


def _canon_factors(powers: dict, coeff: Fraction, out: dict):
    """Accumulate ``coeff * prod(atom**power)`` into *out*, eliminating cos**2."""
    cos_reduce = [a for a, p in powers.items() if a[1] == COS and p >= 2]
    if not cos_reduce:
        key = tuple(sorted(powers.items()))
        c = out.get(key, 0) + coeff
        if c:
            out[key] = c
        else:
            out.pop(key, None)
        return
    atom = cos_reduce[0]
    p = powers.pop(atom)
    half, rest = divmod(p, 2)
    if rest:
        powers[atom] = 1
    sin_atom = (atom[0], SIN)
    base_sin = powers.get(sin_atom, 0)
    # cos^(2h) = (1 - sin^2)^h
    for t in range(half + 1):
        pw = dict(powers)
        s = base_sin + 2 * t
        if s:
            pw[sin_atom] = s
        else:
            pw.pop(sin_atom, None)
        _canon_factors(pw, coeff * comb(half, t) * (-1) ** t, out)


def _mul_key_into(k1: tuple, k2: tuple, coeff: Fraction, out: dict):
    if not k1 or not k2:
        key = k1 or k2
        c = out.get(key, 0) + coeff
        if c:
            out[key] = c
        else:
            out.pop(key, None)
        return
    powers = dict(k1)
    for a, p in k2:
        powers[a] = powers.get(a, 0) + p
    _canon_factors(powers, coeff, out)


class Expr:
    """Immutable canonical differential function over a :class:`Context`."""

    __slots__ = ("ctx", "_terms", "_hash")

    def __init__(self, ctx: Context, terms: dict | None = None):
        self.ctx = ctx
        self._terms = terms or {}
        self._hash = None

    # construction -------------------------------------------------------
    @classmethod
    def const(cls, ctx, c) -> "Expr":
        c = Fraction(c)
        return cls(ctx, {(): c} if c else {})

    @classmethod
    def atom(cls, ctx, atom, power: int = 1) -> "Expr":
        out = {}
        _canon_factors({atom: power}, Fraction(1), out)
        return cls(ctx, out)

    @classmethod
    def jet(cls, ctx, dep: int, idx) -> "Expr":
        idx = tuple(idx)
        if len(idx) != ctx.p or any(c < 0 for c in idx):
            raise ContextError(f"bad multi-index {idx}")
        if not 0 <= dep < ctx.q:
            raise ContextError(f"dependent index {dep} out of range")
        return cls(ctx, {((jet_atom(dep, idx), 1),): Fraction(1)})

    @classmethod
    def zero(cls, ctx) -> "Expr":
        return cls(ctx, {})

    # inspection ---------------------------------------------------------
    @property
    def terms(self) -> list[tuple[tuple, Fraction]]:
        """Canonical sorted list of ``(factors, coeff)``."""
        return sorted(self._terms.items(), key=lambda kv: (_degree(kv[0]), kv[0]))

    def is_zero(self) -> bool:
        return not self._terms

    def is_constant(self) -> bool:
        return all(not k for k in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get((), Fraction(0))

    def atoms(self) -> set:
        return {a for key in self._terms for a, _ in key}

    def jet_vars(self) -> list[JetVar]:
        found = {JetVar(a[0], a[3]) for a in self.atoms() if a[1] == JET}
        return sorted(found, key=lambda v: (v.dep, mi_key(v.idx)))

    def __len__(self):
        return len(self._terms)

    # arithmetic ---------------------------------------------------------
    def _coerce(self, other) -> "Expr":
        if isinstance(other, Expr):
            if other.ctx != self.ctx:
                raise ContextError("expressions belong to different contexts")
            return other
        if isinstance(other, (int, Fraction)):
            return Expr.const(self.ctx, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self._terms)
        for k, c in other._terms.items():
            s = out.get(k, 0) + c
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return Expr(self.ctx, out)

    __radd__ = __add__

    def __neg__(self):
        return Expr(self.ctx, {k: -c for k, c in self._terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out: dict = {}
        for k1, c1 in self._terms.items():
            for k2, c2 in other._terms.items():
                _mul_key_into(k1, k2, c1 * c2, out)
        return Expr(self.ctx, out)

    __rmul__ = __mul__

    def __pow__(self, n):
        if not isinstance(n, int) or isinstance(n, bool):
            raise UnsupportedOperation(f"exponent must be an integer, got {n!r}")
        if n < 0:
            raise UnsupportedOperation(f"negative exponent {n} is not supported")
        result = Expr.const(self.ctx, 1)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def scale(self, c) -> "Expr":
        c = Fraction(c)
        if not c:
            return Expr.zero(self.ctx)
        return Expr(self.ctx, {k: v * c for k, v in self._terms.items()})

    # comparison ---------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Expr.const(self.ctx, other)
        if not isinstance(other, Expr):
            return NotImplemented
        return self.ctx == other.ctx and self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self._terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self._terms)

    def __str__(self):
        from .printer import print_expr

        return print_expr(self)

    def __repr__(self):
        return f"Expr({self})"


def _degree(key) -> int:
    return sum(p for _, p in key)


def apply_derivation(f: Expr, image: Callable[[tuple], Expr | None]) -> Expr:
    """Apply the derivation sending each atom ``a`` to ``image(a)`` (``None`` = 0).

    Derivations are determined by their values on atoms via the Leibniz rule;
    partial derivatives, total derivatives and prolonged vector fields are all
    instances of this.
    """
    out: dict = {}
    cache: dict = {}
    for key, c in f._terms.items():
        for pos, (atom, p) in enumerate(key):
            if atom in cache:
                d = cache[atom]
            else:
                d = cache[atom] = image(atom)
            if d is None or not d._terms:
                continue
            if p > 1:
                rest = key[:pos] + ((atom, p - 1),) + key[pos + 1:]
            else:
                rest = key[:pos] + key[pos + 1:]
            coeff = c * p
            for k2, c2 in d._terms.items():
                _mul_key_into(rest, k2, coeff * c2, out)
    return Expr(f.ctx, out)


def trig_image(ctx: Context, atom: tuple, inner: Expr | None) -> Expr | None:
    """Chain rule for sin/cos given the image of their order-0 argument."""
    if inner is None or not inner:
        return None
    if atom[1] == SIN:
        return Expr.atom(ctx, (atom[0], COS)) * inner
    return -(Expr.atom(ctx, (atom[0], SIN)) * inner)


def partial(f: Expr, v: JetVar) -> Expr:
    """Formal partial derivative with respect to the jet variable *v*.

    Distinct atoms are independent symbols, except that the derivative with
    respect to an order-0 variable also acts on ``sin``/``cos`` of it.
    """
    target = v.atom if isinstance(v, JetVar) else jet_atom(*v)
    one = Expr.const(f.ctx, 1)
    order0 = target[2] == 0

    def image(atom):
        if atom == target:
            return one
        if order0 and atom[1] != JET and atom[0] == target[0]:
            return trig_image(f.ctx, atom, one)
        return None

    return apply_derivation(f, image)


def substitute(f: Expr, image: Callable[[tuple], Expr | None]) -> Expr:
    """Ring homomorphism replacing each atom ``a`` by ``image(a)`` (``None`` keeps it)."""
    out = Expr.zero(f.ctx)
    cache: dict = {}
    for key, c in f._terms.items():
        term = Expr.const(f.ctx, c)
        for atom, p in key:
            if atom not in cache:
                img = image(atom)
                cache[atom] = img if img is not None else Expr.atom(f.ctx, atom)
            term = term * cache[atom] ** p
        out = out + term
    return out


@dataclass(frozen=True)
class OrderInfo:
    """Componentwise maximum multi-index per dependent variable, plus total order."""

    per_dep: dict
    total: int

    def of(self, dep: int):
        return self.per_dep.get(dep)


def max_order(f: Expr) -> OrderInfo:
    per_dep: dict = {}
    total = 0
    zero = (0,) * f.ctx.p
    for atom in f.atoms():
        dep = atom[0]
        idx = atom[3] if atom[1] == JET else zero
        cur = per_dep.get(dep, zero)
        per_dep[dep] = tuple(max(a, b) for a, b in zip(cur, idx))
        total = max(total, sum(idx))
    return OrderInfo(per_dep, total)


def normalize(tree, ctx: Context) -> Expr:
    """Evaluate a raw expression tree into canonical form.

    Accepted nodes: ``int``/``Fraction``, :class:`JetVar`, :class:`Expr`, and
    tuples ``("+", *args)``, ``("*", *args)``, ``("-", a)``, ``("^", a, n)``,
    ``("sin", dep)``, ``("cos", dep)``.
    """
    if isinstance(tree, Expr):
        if tree.ctx != ctx:
            raise ContextError("expression belongs to a different context")
        return tree
    if isinstance(tree, bool):
        raise UnsupportedOperation("booleans are not expressions")
    if isinstance(tree, (int, Fraction)):
        return Expr.const(ctx, tree)
    if isinstance(tree, JetVar):
        return Expr.jet(ctx, tree.dep, tree.idx)
    if not isinstance(tree, tuple) or not tree:
        raise UnsupportedOperation(f"cannot normalize {tree!r}")
    op, *args = tree
    if op == "+":
        out = Expr.zero(ctx)
        for a in args:
            out = out + normalize(a, ctx)
        return out
    if op == "*":
        out = Expr.const(ctx, 1)
        for a in args:
            out = out * normalize(a, ctx)
        return out
    if op == "-" and len(args) == 1:
        return -normalize(args[0], ctx)
    if op == "^" and len(args) == 2:
        return normalize(args[0], ctx) ** args[1]
    if op in ("sin", "cos") and len(args) == 1:
        dep = ctx.dep_index(args[0])
        return Expr.atom(ctx, (dep, SIN if op == "sin" else COS))
    raise UnsupportedOperation(f"unknown node {op!r}")


def expr_sum(ctx: Context, items: Iterable[Expr]) -> Expr:
    out = Expr.zero(ctx)
    for e in items:
        out = out + e
    return out
