"""Characters, the sets D_{k,m}, and boolean combinations of their cosets.

A boolean combination of cosets of D_{k_i,m_j} inside G^n is a finite union
of cosets of (G^[l])^n with l = lcm(m_j). :func:`coset_normalize` computes
that union extensionally as a set of residue vectors in (Z/l)^(r*n).
"""
from __future__ import annotations

import json
import warnings
from dataclasses import dataclass
from math import lcm

import numpy as np

from . import kernels
from .errors import (
    ArityMismatch,
    ClassLimitExceeded,
    DivisibleGroupWarning,
    MixedArity,
    ParseError,
    PresentationMismatch,
    ShapeMismatch,
)
from .multgroup import GroupElement, GroupPresentation

DEFAULT_MAX_CLASSES = 10**6


@dataclass(frozen=True)
class Character:
    k: tuple

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        if not self.k:
            raise ArityMismatch("a character needs n >= 1")

    @property
    def n(self) -> int:
        return len(self.k)


def character_eval(k, g) -> GroupElement:
    k = k.k if isinstance(k, Character) else tuple(int(x) for x in k)
    g = list(g)
    if len(k) != len(g):
        raise ArityMismatch(f"character of length {len(k)} applied to {len(g)} elements")
    if not g:
        raise ArityMismatch("empty tuple")
    pres = g[0].presentation
    acc = list(pres.identity().exponents)
    for ki, x in zip(k, g):
        if x.presentation != pres:
            raise PresentationMismatch("elements from different presentations")
        if ki:
            acc = [a + ki * e for a, e in zip(acc, x.exponents)]
    return GroupElement(pres, tuple(acc))


def dkm_membership(g, k, m: int) -> bool:
    """Whether chi_k(g) is an m-th power in G."""
    if m < 1:
        raise ValueError("modulus must be >= 1")
    chi = character_eval(k, g)
    if chi.presentation.divisible:
        return True
    for x in g:
        x.integer_exponents()
    return all(e % m == 0 for e in chi.integer_exponents())


@dataclass(frozen=True)
class CosetConstraint:
    """``g in shift * D_{k,m}`` (polarity True) or its complement."""

    k: tuple
    m: int
    shift: tuple = ()
    polarity: bool = True

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(int(x) for x in self.k))
        object.__setattr__(self, "shift", tuple(tuple(int(e) for e in s) for s in self.shift))
        if int(self.m) < 1:
            raise ValueError("modulus must be >= 1")
        object.__setattr__(self, "m", int(self.m))

    @property
    def n(self) -> int:
        return len(self.k)

    def shift_vectors(self, r: int):
        return self.shift if self.shift else tuple((0,) * r for _ in self.k)

    def holds(self, g) -> bool:
        """Direct evaluation through :func:`dkm_membership`."""
        pres = g[0].presentation
        shifted = [x * pres.element(s).inverse() for x, s in zip(g, self.shift_vectors(pres.rank))]
        return dkm_membership(shifted, self.k, self.m) == self.polarity


@dataclass(frozen=True)
class And:
    children: tuple


@dataclass(frozen=True)
class Or:
    children: tuple


@dataclass(frozen=True)
class Not:
    child: object


def evaluate(expr, g) -> bool:
    """Recursive evaluation of a constraint tree at a tuple ``g``."""
    if isinstance(expr, CosetConstraint):
        return expr.holds(g)
    if isinstance(expr, And):
        return all(evaluate(c, g) for c in expr.children)
    if isinstance(expr, Or):
        return any(evaluate(c, g) for c in expr.children)
    if isinstance(expr, Not):
        return not evaluate(expr.child, g)
    raise TypeError(f"not a constraint expression: {expr!r}")


def atoms(expr):
    if isinstance(expr, CosetConstraint):
        yield expr
    elif isinstance(expr, (And, Or)):
        for c in expr.children:
            yield from atoms(c)
    elif isinstance(expr, Not):
        yield from atoms(expr.child)
    else:
        raise TypeError(f"not a constraint expression: {expr!r}")


class CosetUnion:
    """Union of cosets of (G^[l])^n, stored as a mask over (Z/l)^(r*n)."""

    __slots__ = ("modulus", "arity", "rank", "mask")

    def __init__(self, modulus: int, arity: int, rank: int, mask):
        self.modulus = int(modulus)
        self.arity = int(arity)
        self.rank = int(rank)
        mask = np.asarray(mask, dtype=np.bool_)
        if mask.shape != (self.modulus ** (self.arity * self.rank),):
            raise ShapeMismatch("mask size does not match modulus, arity and rank")
        mask.setflags(write=False)
        self.mask = mask

    @classmethod
    def from_classes(cls, modulus, arity, rank, classes):
        mask = np.zeros(modulus ** (arity * rank), dtype=np.bool_)
        for v in classes:
            mask[_encode([x % modulus for x in v], modulus)] = True
        return cls(modulus, arity, rank, mask)

    @classmethod
    def full(cls, arity, rank, modulus=1):
        return cls(modulus, arity, rank, np.ones(modulus ** (arity * rank), dtype=np.bool_))

    @property
    def width(self) -> int:
        return self.arity * self.rank

    @property
    def classes(self) -> list:
        codes = np.flatnonzero(self.mask)
        return [_decode(int(c), self.modulus, self.width) for c in codes]

    def __len__(self):
        return int(self.mask.sum())

    def refine(self, L: int, backend=None) -> "CosetUnion":
        mask = kernels.refine_mask(self.mask, self.modulus, L, self.width, backend=backend)
        return CosetUnion(L, self.arity, self.rank, mask)

    def __eq__(self, other):
        if not isinstance(other, CosetUnion):
            return NotImplemented
        if (self.arity, self.rank) != (other.arity, other.rank):
            return False
        L = lcm(self.modulus, other.modulus)
        return bool(np.array_equal(self.refine(L).mask, other.refine(L).mask))

    __hash__ = None

    def to_dict(self) -> dict:
        return {
            "modulus": self.modulus,
            "arity": self.arity,
            "rank": self.rank,
            "class_count": len(self),
            "total_classes": int(self.mask.size),
            "classes": self.classes,
        }

    def __repr__(self):
        return f"CosetUnion(modulus={self.modulus}, arity={self.arity}, rank={self.rank}, classes={len(self)})"


def _encode(v, l):
    c = 0
    for x in v:
        c = c * l + x
    return c


def _decode(code, l, width):
    out = [0] * width
    for p in range(width - 1, -1, -1):
        out[p] = code % l
        code //= l
    return out


def coset_union_ops(op: str, A: CosetUnion, B: CosetUnion | None = None, backend=None) -> CosetUnion:
    if op == "complement":
        return CosetUnion(A.modulus, A.arity, A.rank, ~A.mask)
    if B is None:
        raise ValueError(f"{op} needs two operands")
    if (A.arity, A.rank) != (B.arity, B.rank):
        raise ShapeMismatch(
            f"shapes (n={A.arity}, r={A.rank}) and (n={B.arity}, r={B.rank}) differ"
        )
    L = lcm(A.modulus, B.modulus)
    a = A.refine(L, backend).mask
    b = B.refine(L, backend).mask
    if op == "union":
        return CosetUnion(L, A.arity, A.rank, a | b)
    if op == "intersect":
        return CosetUnion(L, A.arity, A.rank, a & b)
    raise ValueError(f"unknown operation {op!r}")


def coset_member(U: CosetUnion, g) -> bool:
    g = list(g)
    if len(g) != U.arity:
        raise ShapeMismatch(f"tuple of length {len(g)} for arity {U.arity}")
    vec = []
    for x in g:
        if x.presentation.rank != U.rank:
            raise ShapeMismatch(f"element of rank {x.presentation.rank} for union of rank {U.rank}")
        vec.extend(e % U.modulus for e in x.integer_exponents())
    return bool(U.mask[_encode(vec, U.modulus)])


def coset_normalize(expr, presentation: GroupPresentation, n: int | None = None, *,
                    max_classes=DEFAULT_MAX_CLASSES, backend=None) -> CosetUnion:
    leaves = list(atoms(expr))
    arities = {c.n for c in leaves}
    if n is not None:
        arities.add(n)
    r = presentation.rank
    for c in leaves:
        if c.shift and (len(c.shift) != c.n or any(len(s) != r for s in c.shift)):
            raise MixedArity(f"shift {c.shift} does not match arity {c.n} and rank {r}")
    if len(arities) != 1:
        raise MixedArity(f"constraints have arities {sorted(arities)}")
    n = arities.pop()
    if presentation.divisible:
        warnings.warn(
            "every coset constraint is trivially true in a divisible group",
            DivisibleGroupWarning,
            stacklevel=2,
        )
        holds = _eval_constant(expr)
        return CosetUnion(1, n, r, np.array([holds], dtype=np.bool_))
    l = lcm(*(c.m for c in leaves))
    total = l ** (r * n)
    if total > max_classes:
        raise ClassLimitExceeded(
            f"{total} residue classes exceed the limit {max_classes}", classes=total, limit=max_classes
        )
    cache = {}

    def walk(e):
        if isinstance(e, CosetConstraint):
            key = (e.k, e.m, e.shift_vectors(r))
            if key not in cache:
                shift = [x for s in e.shift_vectors(r) for x in s]
                cache[key] = kernels.constraint_mask(l, n, r, e.k, shift, e.m, backend=backend)
            mask = cache[key]
            return mask if e.polarity else ~mask
        if isinstance(e, And):
            out = np.ones(total, dtype=np.bool_)
            for c in e.children:
                out &= walk(c)
            return out
        if isinstance(e, Or):
            out = np.zeros(total, dtype=np.bool_)
            for c in e.children:
                out |= walk(c)
            return out
        return ~walk(e.child)

    return CosetUnion(l, n, r, walk(expr))


def _eval_constant(expr) -> bool:
    if isinstance(expr, CosetConstraint):
        return expr.polarity
    if isinstance(expr, And):
        return all(_eval_constant(c) for c in expr.children)
    if isinstance(expr, Or):
        return any(_eval_constant(c) for c in expr.children)
    return not _eval_constant(expr.child)


# ---------------------------------------------------------------------------
# prefix expression format


def _tokenize(text):
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in "()":
            tokens.append((ch, i + 1))
            i += 1
        else:
            start = i
            depth = 0
            while i < len(text):
                ch = text[i]
                if ch == "[":
                    depth += 1
                elif ch == "]":
                    depth -= 1
                elif depth == 0 and (ch.isspace() or ch in "()"):
                    break
                i += 1
            if depth != 0:
                raise ParseError("unbalanced brackets", line=1, column=start + 1)
            tokens.append((text[start:i], start + 1))
    return tokens


def parse_constraints(text: str, rank: int):
    """Parse e.g. ``(and (coset k=[1] m=2) (not (coset k=[1] m=3 shift=[1])))``."""
    tokens = _tokenize(text)
    pos = 0

    def fail(msg, col=None):
        if col is None:
            col = tokens[pos][1] if pos < len(tokens) else len(text) + 1
        raise ParseError(msg, line=1, column=col)

    def atom(kind, col, args):
        fields = {}
        for word, c in args:
            if "=" not in word:
                fail(f"expected key=value, got {word!r}", c)
            key, value = word.split("=", 1)
            try:
                fields[key] = json.loads(value)
            except json.JSONDecodeError:
                if key == "polarity":
                    fields[key] = value
                else:
                    fail(f"cannot read value of {key!r}", c)
        if "k" not in fields or "m" not in fields:
            fail("coset atom needs k=[...] and m=<int>", col)
        k = fields["k"]
        if not isinstance(k, list) or not all(isinstance(x, int) for x in k):
            fail("k must be a list of integers", col)
        shift = fields.get("shift", [])
        if shift and all(isinstance(x, int) for x in shift):
            if rank == 0 or len(shift) % max(rank, 1):
                fail("flat shift length is not a multiple of the group rank", col)
            shift = [shift[i:i + rank] for i in range(0, len(shift), rank)]
        polarity = kind == "coset"
        if str(fields.get("polarity", "in")) in ("out", "notin", "not-in"):
            polarity = not polarity
        try:
            return CosetConstraint(tuple(k), int(fields["m"]), tuple(map(tuple, shift)), polarity)
        except (TypeError, ValueError) as exc:
            fail(str(exc), col)

    def expr():
        nonlocal pos
        if pos >= len(tokens):
            fail("unexpected end of expression")
        tok, col = tokens[pos]
        if tok != "(":
            if tok in ("coset", "ncoset"):
                pos += 1
                args = []
                while pos < len(tokens) and tokens[pos][0] not in "()":
                    args.append(tokens[pos])
                    pos += 1
                return atom(tok, col, args)
            fail(f"unexpected token {tok!r}", col)
        pos += 1
        if pos >= len(tokens):
            fail("unexpected end of expression")
        head, hcol = tokens[pos]
        pos += 1
        if head in ("coset", "ncoset"):
            args = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                if tokens[pos][0] == "(":
                    fail("nested expression inside an atom")
                args.append(tokens[pos])
                pos += 1
            node = atom(head, hcol, args)
        elif head in ("and", "or", "not"):
            children = []
            while pos < len(tokens) and tokens[pos][0] != ")":
                children.append(expr())
            if head == "not":
                if len(children) != 1:
                    fail("not takes exactly one argument", hcol)
                node = Not(children[0])
            else:
                if not children:
                    fail(f"{head} needs at least one argument", hcol)
                node = (And if head == "and" else Or)(tuple(children))
        else:
            fail(f"unknown operator {head!r}", hcol)
        if pos >= len(tokens) or tokens[pos][0] != ")":
            fail("expected ')'")
        pos += 1
        return node

    result = expr()
    if pos != len(tokens):
        fail(f"trailing input {tokens[pos][0]!r}")
    return result

