"""A prover for multiplicative linear logic with mix.

Coarse causal-type relationships (inclusions between tensor/par/lolli
shapes that hold for every choice of first-order atoms) are exactly the
sequents derivable in multiplicative linear logic extended with the binary
and nullary mix rules.  This module decides such sequents and produces
checkable proof trees.

Formulas are kept in negation normal form: literals, the units ``1``/``bot``
(printed ``I`` and ``I^*``), and binary tensors and pars.  A two-sided
sequent ``A1, .., An |- B`` is the one-sided ``|- A1^*, .., An^*, B``.

Rules (one-sided, multisets)::

    ax:      |- a, a^*
    one:     |- 1
    mix0:    |-
    bot:     |- G          =>  |- G, bot
    par:     |- G, a, b    =>  |- G, a (+) b
    tensor:  |- G, a   |- D, b   =>  |- G, D, a (x) b
    mix:     |- G   |- D   =>  |- G, D

Search applies the invertible rules first (``bot``, ``par``, and removal of
``1`` from a context, which mix makes admissible), short-circuits sequents
of bare literals by perfect matching, and otherwise branches over tensor
context splits and mix bipartitions with memoization.  Unbalanced literal
counts prune early: every rule preserves the property that each atom occurs
as often positively as negatively in a provable sequent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence, Union

from .errors import (
    CombinatorialBlowup,
    MalformedProof,
    TypeSyntaxError,
    UnsupportedConnective,
)
from . import typesys


# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class FAtom:
    key: str
    neg: bool = False


@dataclass(frozen=True)
class FOne:
    pass


@dataclass(frozen=True)
class FBot:
    pass


@dataclass(frozen=True)
class FTensor:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class FPar:
    left: "Formula"
    right: "Formula"


Formula = Union[FAtom, FOne, FBot, FTensor, FPar]


def dual(f: Formula) -> Formula:
    if isinstance(f, FAtom):
        return FAtom(f.key, not f.neg)
    if isinstance(f, FOne):
        return FBot()
    if isinstance(f, FBot):
        return FOne()
    if isinstance(f, FTensor):
        return FPar(dual(f.left), dual(f.right))
    return FTensor(dual(f.left), dual(f.right))


def formula_of_type(t: typesys.Type) -> Formula:
    """Forget dimensions and n-ary grouping; keep only the logical shape."""
    if isinstance(t, typesys.Atom):
        return FAtom(t.label if t.dim is None else f"{t.label}[{t.dim}]")
    if isinstance(t, typesys.Unit):
        return FOne()
    if isinstance(t, typesys.Dual):
        return dual(formula_of_type(t.body))
    if isinstance(t, typesys.Lolli):
        return FPar(dual(formula_of_type(t.left)), formula_of_type(t.right))
    if isinstance(t, (typesys.Tensor, typesys.Par)):
        cls = FTensor if isinstance(t, typesys.Tensor) else FPar
        parts = [formula_of_type(p) for p in t.parts]
        f = parts[-1]
        for p in reversed(parts[:-1]):
            f = cls(p, f)
        return f
    raise UnsupportedConnective(f"{type(t).__name__} has no sequent counterpart")


def parse_formula(text: str) -> Formula:
    return formula_of_type(typesys.parse_type(text))


def parse_sequent(text: str) -> tuple[Formula, ...]:
    """``A, B |- C`` becomes ``|- A^*, B^*, C``; a bare list is one-sided."""

    def split_formulas(side: str) -> list[Formula]:
        side = side.strip()
        if not side:
            return []
        return [parse_formula(s) for s in side.split(",")]

    if "|-" in text:
        left, right = text.split("|-", 1)
        if "|-" in right:
            raise TypeSyntaxError(f"more than one |- in {text!r}")
        return tuple(
            [dual(f) for f in split_formulas(left)] + split_formulas(right)
        )
    return tuple(split_formulas(text))


def render_formula(f: Formula, ctx: int = 2) -> str:
    if isinstance(f, FAtom):
        return f"{f.key}^*" if f.neg else f.key
    if isinstance(f, FOne):
        return "I"
    if isinstance(f, FBot):
        return "I^*"
    if isinstance(f, FTensor):
        s, prec = f"{render_formula(f.left, 0)} (x) {render_formula(f.right, 0)}", 1
    else:
        s, prec = f"{render_formula(f.left, 1)} (+) {render_formula(f.right, 1)}", 2
    return f"({s})" if prec > ctx else s


def render_sequent(seq: Sequence[Formula]) -> str:
    return "|- " + ", ".join(render_formula(f) for f in seq)


def _size(f: Formula) -> int:
    if isinstance(f, (FTensor, FPar)):
        return 1 + _size(f.left) + _size(f.right)
    return 1


def _key(seq: Sequence[Formula]) -> tuple[str, ...]:
    return tuple(sorted(render_formula(f) for f in seq))


def _balanced(seq: Sequence[Formula]) -> bool:
    counts: dict[str, int] = {}

    def walk(f: Formula) -> None:
        if isinstance(f, FAtom):
            counts[f.key] = counts.get(f.key, 0) + (-1 if f.neg else 1)
        elif isinstance(f, (FTensor, FPar)):
            walk(f.left)
            walk(f.right)

    for f in seq:
        walk(f)
    return all(v == 0 for v in counts.values())


# -- proofs --------------------------------------------------------------------


@dataclass(frozen=True)
class Proof:
    """A derivation; ``principal`` is the index of the formula the rule acts
    on (absent for ``ax``/``one``/``mix0``/``mix``)."""

    rule: str
    sequent: tuple[Formula, ...]
    premises: tuple["Proof", ...] = ()
    principal: int | None = None


def _remove_at(seq: tuple[Formula, ...], i: int) -> tuple[Formula, ...]:
    return seq[:i] + seq[i + 1 :]


def _remove_one(seq: tuple[Formula, ...], f: Formula) -> tuple[Formula, ...] | None:
    for i, g in enumerate(seq):
        if g == f:
            return _remove_at(seq, i)
    return None


def verify_proof(proof: Proof) -> bool:
    """Check every rule application; raises :class:`MalformedProof` with the
    offending node's conclusion on failure."""

    def fail(node: Proof, why: str):
        raise MalformedProof(f"{why} at {render_sequent(node.sequent)}")

    def go(node: Proof) -> None:
        seq = node.sequent
        rule = node.rule
        if rule == "ax":
            if node.premises:
                fail(node, "ax has premises")
            if len(seq) != 2 or not (
                isinstance(seq[0], FAtom)
                and isinstance(seq[1], FAtom)
                and seq[0] == dual(seq[1])
            ):
                fail(node, "ax needs exactly a literal and its dual")
        elif rule == "one":
            if node.premises or seq != (FOne(),):
                fail(node, "one proves exactly |- I")
        elif rule == "mix0":
            if node.premises or seq:
                fail(node, "mix0 proves exactly the empty sequent")
        elif rule == "bot":
            i = node.principal
            if len(node.premises) != 1 or i is None or not (0 <= i < len(seq)):
                fail(node, "bot needs one premise and a principal index")
            if not isinstance(seq[i], FBot):
                fail(node, "bot principal is not I^*")
            if node.premises[0].sequent != _remove_at(seq, i):
                fail(node, "bot premise must drop exactly the principal")
        elif rule == "par":
            i = node.principal
            if len(node.premises) != 1 or i is None or not (0 <= i < len(seq)):
                fail(node, "par needs one premise and a principal index")
            f = seq[i]
            if not isinstance(f, FPar):
                fail(node, "par principal is not a par")
            want = seq[:i] + (f.left, f.right) + seq[i + 1 :]
            if node.premises[0].sequent != want:
                fail(node, "par premise must split the principal in place")
        elif rule == "tensor":
            i = node.principal
            if len(node.premises) != 2 or i is None or not (0 <= i < len(seq)):
                fail(node, "tensor needs two premises and a principal index")
            f = seq[i]
            if not isinstance(f, FTensor):
                fail(node, "tensor principal is not a tensor")
            g1 = _remove_one(node.premises[0].sequent, f.left)
            g2 = _remove_one(node.premises[1].sequent, f.right)
            if g1 is None or g2 is None:
                fail(node, "tensor premises must contain the factors")
            if sorted(_key(g1 + g2)) != sorted(_key(_remove_at(seq, i))):
                fail(node, "tensor premises must split the context")
        elif rule == "mix":
            if len(node.premises) != 2:
                fail(node, "mix needs two premises")
            merged = node.premises[0].sequent + node.premises[1].sequent
            if sorted(_key(merged)) != sorted(_key(seq)):
                fail(node, "mix premises must partition the sequent")
        else:
            fail(node, f"unknown rule {rule!r}")
        for prem in node.premises:
            go(prem)

    go(proof)
    return True


# -- search --------------------------------------------------------------------


class _Search:
    def __init__(self, budget: int):
        self.budget = budget
        self.expansions = 0
        self.memo: dict[tuple[str, ...], Proof | None] = {}

    def prove(self, seq: tuple[Formula, ...]) -> Proof | None:
        key = _key(seq)
        if key in self.memo:
            cached = self.memo[key]
            return self._rebuild(cached, seq) if cached is not None else None
        self.expansions += 1
        if self.expansions > self.budget:
            raise CombinatorialBlowup(
                f"proof search exceeded {self.budget} expansions"
            )
        proof = self._prove(seq)
        self.memo[key] = proof
        return proof

    def _rebuild(self, proof: Proof, seq: tuple[Formula, ...]) -> Proof:
        # Memo hits are stored against one formula ordering; permute the
        # cached derivation's conclusion to the requested one by re-running
        # the (cheap) top-level rule match.  Orderings only differ by where
        # invertible rules put things, so a full re-proof is never needed:
        # we simply re-prove with the memoized subresults available.
        if proof.sequent == seq:
            return proof
        return self._prove(seq)

    def _prove(self, seq: tuple[Formula, ...]) -> Proof | None:
        # invertible: bot removal, par expansion, one removal (via mix)
        for i, f in enumerate(seq):
            if isinstance(f, FBot):
                sub = self.prove(_remove_at(seq, i))
                return Proof("bot", seq, (sub,), i) if sub else None
            if isinstance(f, FPar):
                sub = self.prove(seq[:i] + (f.left, f.right) + seq[i + 1 :])
                return Proof("par", seq, (sub,), i) if sub else None
        if seq == (FOne(),):
            return Proof("one", seq)
        for i, f in enumerate(seq):
            if isinstance(f, FOne):
                sub = self.prove(_remove_at(seq, i))
                if sub is None:
                    return None
                unit = Proof("one", (FOne(),))
                return Proof("mix", seq, (sub, unit) if i == len(seq) - 1 else (unit, sub))

        if not _balanced(seq):
            return None
        if not seq:
            return Proof("mix0", seq)

        # literals only: pair them off
        if all(isinstance(f, FAtom) for f in seq):
            return self._match_literals(seq)

        # tensor: every principal, every context split
        n = len(seq)
        for i, f in enumerate(seq):
            if not isinstance(f, FTensor):
                continue
            rest = list(_remove_at(seq, i))
            m = len(rest)
            for mask in range(1 << m):
                left = tuple(rest[j] for j in range(m) if mask >> j & 1)
                right = tuple(rest[j] for j in range(m) if not mask >> j & 1)
                p1 = self.prove(left + (f.left,))
                if p1 is None:
                    continue
                p2 = self.prove(right + (f.right,))
                if p2 is None:
                    continue
                return Proof("tensor", seq, (p1, p2), i)

        # mix: proper bipartitions (both halves nonempty, fix element 0 left)
        for mask in range(1 << (n - 1)):
            bits = mask << 1 | 1
            left = tuple(seq[j] for j in range(n) if bits >> j & 1)
            right = tuple(seq[j] for j in range(n) if not bits >> j & 1)
            if not right:
                continue
            p1 = self.prove(left)
            if p1 is None:
                continue
            p2 = self.prove(right)
            if p2 is None:
                continue
            return Proof("mix", seq, (p1, p2))
        return None

    def _match_literals(self, seq: tuple[Formula, ...]) -> Proof | None:
        if not seq:
            return Proof("mix0", seq)
        if len(seq) == 2 and seq[0] == dual(seq[1]):
            return Proof("ax", seq)
        a = seq[0]
        rest = _remove_at(seq, 0)
        partner = _remove_one(rest, dual(a))
        if partner is None:
            return None
        sub = self._match_literals(partner)
        if sub is None:
            return None
        pair = Proof("ax", (a, dual(a)))
        return Proof("mix", seq, (pair, sub))


def prove(sequent: Sequence[Formula] | str, budget: int = 200_000) -> Proof | None:
    """Search for a derivation; ``None`` means not provable.  ``budget``
    bounds distinct subsequent expansions."""
    seq = parse_sequent(sequent) if isinstance(sequent, str) else tuple(sequent)
    return _Search(budget).prove(seq)


def provable(sequent: Sequence[Formula] | str, budget: int = 200_000) -> bool:
    return prove(sequent, budget) is not None


# -- rendering and re-parsing ----------------------------------------------------

_PROOF_LINE = re.compile(r"^(\s*)(ax|one|mix0|bot|par|tensor|mix)(?:@(\d+))?:\s*\|-\s*(.*)$")


def render_proof(proof: Proof) -> str:
    """Indented tree, one node per line: ``rule[@principal]: |- formulas``."""
    lines: list[str] = []

    def go(node: Proof, depth: int) -> None:
        at = "" if node.principal is None else f"@{node.principal}"
        lines.append(f"{'  ' * depth}{node.rule}{at}: {render_sequent(node.sequent)}")
        for prem in node.premises:
            go(prem, depth + 1)

    go(proof, 0)
    return "\n".join(lines)


def parse_proof(text: str) -> Proof:
    """Inverse of :func:`render_proof` (modulo whitespace)."""
    entries: list[tuple[int, str, int | None, tuple[Formula, ...]]] = []
    for raw in text.splitlines():
        if not raw.strip():
            continue
        m = _PROOF_LINE.match(raw)
        if m is None:
            raise MalformedProof(f"cannot parse proof line {raw.strip()!r}")
        indent, rule, principal, body = m.groups()
        if len(indent) % 2:
            raise MalformedProof(f"odd indentation in {raw.strip()!r}")
        formulas = tuple(parse_formula(s) for s in body.split(",")) if body.strip() else ()
        entries.append((len(indent) // 2, rule, None if principal is None else int(principal), formulas))

    pos = 0

    def build(depth: int) -> Proof:
        nonlocal pos
        if pos >= len(entries) or entries[pos][0] != depth:
            raise MalformedProof("proof tree indentation does not nest")
        d, rule, principal, seq = entries[pos]
        pos += 1
        premises = []
        while pos < len(entries) and entries[pos][0] == depth + 1:
            premises.append(build(depth + 1))
        return Proof(rule, seq, tuple(premises), principal)

    proof = build(0)
    if pos != len(entries):
        raise MalformedProof("trailing lines after the root derivation")
    return proof
