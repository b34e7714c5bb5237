"""Infix Form Genetic Programming: unconstrained integer genomes decoded by a
modulo-driven state machine into valid infix expressions, repaired at the end
when the raw translation stops mid-expression.  Every sub-expression of the
parsed tree is a candidate solution.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import (
    OP_SYMBOLS,
    SYMBOL_OPS,
    FitnessCaseSet,
    PrimitiveSet,
    RandomSource,
    vector_apply,
)

_START = "start"
_VARIABLE = "variable"
_OPERATOR = "operator"
_OPEN = "open"
_CLOSE = "close"

_PRECEDENCE = {"+": 1, "-": 1, "*": 2, "/": 2}


@dataclass(frozen=True)
class IfgpChromosome:
    """Fixed-length integer genome; the last gene only feeds the repair step."""

    genes: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.genes)


@dataclass
class Var:
    name: str
    parens: int = 0


@dataclass
class Bin:
    op: str  # display symbol: + - * /
    left: "Var | Bin"
    right: "Var | Bin"
    parens: int = 0


@dataclass
class InfixExpression:
    tokens: tuple[str, ...]
    root: Var | Bin

    @property
    def text(self) -> str:
        return "".join(self.tokens)


def validate_chromosome(chrom: IfgpChromosome, prims: PrimitiveSet) -> None:
    if len(chrom) < 2:
        raise ValueError("chromosome needs at least 2 genes (last one feeds repair)")
    for i, g in enumerate(chrom.genes):
        if not 0 <= g < prims.num_symbols:
            raise ValueError(f"gene {i} out of range [0, {prims.num_symbols})")


def random_chromosome(length: int, prims: PrimitiveSet, rng: RandomSource) -> IfgpChromosome:
    if length < 2:
        raise ValueError("chromosome length must be at least 2")
    return IfgpChromosome(tuple(rng.randint(prims.num_symbols) for _ in range(length)))


def _classify(symbol: str) -> str:
    if symbol == "(":
        return _OPEN
    if symbol == ")":
        return _CLOSE
    if symbol in SYMBOL_OPS:
        return _OPERATOR
    return _VARIABLE


def _permitted(prev: str, surplus: int, prims: PrimitiveSet) -> list[str]:
    """Symbols legal at the current position, in the fixed global order."""
    if prev in (_START, _OPERATOR, _OPEN):
        return list(prims.terminals) + ["("]
    options = [OP_SYMBOLS[f] for f in prims.functions]
    if surplus > 0:
        options.append(")")
    return options


def decode(chrom: IfgpChromosome, prims: PrimitiveSet) -> InfixExpression:
    """Translate genes left to right, then repair into a valid expression.

    Each gene selects (modulo the number of possibilities) among the symbols
    the previous symbol permits.  The last gene is never translated: if the
    raw expression ends in an operator or '(', it names the terminal appended
    by the repair step; unclosed parentheses are then closed.
    """
    validate_chromosome(chrom, prims)
    tokens: list[str] = []
    prev = _START
    surplus = 0
    for gene in chrom.genes[:-1]:
        options = _permitted(prev, surplus, prims)
        symbol = options[gene % len(options)]
        tokens.append(symbol)
        prev = _classify(symbol)
        if prev == _OPEN:
            surplus += 1
        elif prev == _CLOSE:
            surplus -= 1
    if prev in (_OPERATOR, _OPEN):
        tokens.append(prims.terminals[chrom.genes[-1] % len(prims.terminals)])
    tokens.extend(")" * surplus)
    return InfixExpression(tuple(tokens), _parse(tokens))


def validate_tokens(tokens, prims: PrimitiveSet) -> None:
    """Raise ValueError unless the token list is category-legal and balanced."""
    prev = _START
    surplus = 0
    for i, tok in enumerate(tokens):
        cat = _classify(tok)
        if cat == _VARIABLE and tok not in prims.terminals:
            raise ValueError(f"token {i}: unknown symbol {tok!r}")
        if prev in (_START, _OPERATOR, _OPEN):
            allowed = (_VARIABLE, _OPEN)
        else:
            allowed = (_OPERATOR, _CLOSE) if surplus > 0 else (_OPERATOR,)
        if cat not in allowed:
            raise ValueError(f"token {i}: {tok!r} not permitted after {prev}")
        if cat == _OPEN:
            surplus += 1
        elif cat == _CLOSE:
            surplus -= 1
        prev = cat
    if surplus != 0:
        raise ValueError("unbalanced parentheses")
    if prev not in (_VARIABLE, _CLOSE):
        raise ValueError("expression ends mid-phrase")


def _parse(tokens) -> Var | Bin:
    """Precedence-climbing parse; explicit parentheses are kept on the nodes
    so an in-order walk reproduces the token list exactly."""
    pos = 0

    def parse_expr(min_prec: int):
        nonlocal pos
        node = parse_atom()
        while pos < len(tokens) and tokens[pos] in _PRECEDENCE and _PRECEDENCE[tokens[pos]] >= min_prec:
            op = tokens[pos]
            pos += 1
            node = Bin(op, node, parse_expr(_PRECEDENCE[op] + 1))
        return node

    def parse_atom():
        nonlocal pos
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            node = parse_expr(1)
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("unbalanced parentheses")
            pos += 1
            node.parens += 1
            return node
        if tok == ")" or tok in _PRECEDENCE:
            raise ValueError(f"unexpected token {tok!r}")
        return Var(tok)

    root = parse_expr(1)
    if pos != len(tokens):
        raise ValueError("trailing tokens after expression")
    return root


def tokens_of(node: Var | Bin) -> list[str]:
    """In-order token sequence of a node, explicit parentheses included."""
    if isinstance(node, Var):
        body = [node.name]
    else:
        body = tokens_of(node.left) + [node.op] + tokens_of(node.right)
    return ["("] * node.parens + body + [")"] * node.parens


def render(node: Var | Bin) -> str:
    return "".join(tokens_of(node))


def canonical(node: Var | Bin) -> str:
    """Fully parenthesised rendering; ignores stored parentheses so that
    structurally equal sub-trees compare equal."""
    if isinstance(node, Var):
        return node.name
    return f"({canonical(node.left)}{node.op}{canonical(node.right)})"


def _postorder(node):
    if isinstance(node, Bin):
        yield from _postorder(node.left)
        yield from _postorder(node.right)
    yield node


def subexpressions(expr: InfixExpression) -> list[Var | Bin]:
    """Distinct sub-trees in post-order (first occurrence kept)."""
    seen = set()
    out = []
    for node in _postorder(expr.root):
        key = canonical(node)
        if key not in seen:
            seen.add(key)
            out.append(node)
    return out


def _evaluate(root, cases: FitnessCaseSet, prims: PrimitiveSet):
    """Post-order evaluation, one value vector per node."""
    column = {name: i for i, name in enumerate(prims.terminals)}
    results: list[tuple[Var | Bin, np.ndarray, bool]] = []

    def go(node):
        if isinstance(node, Var):
            v, ok = cases.inputs[:, column[node.name]], True
        else:
            lv, lok = go(node.left)
            rv, rok = go(node.right)
            v = vector_apply(SYMBOL_OPS[node.op], lv, rv)
            ok = lok and rok and bool(np.isfinite(v).all())
        results.append((node, v, ok))
        return v, ok

    with np.errstate(all="ignore"):
        go(root)
    return results


def fitness(
    chrom: IfgpChromosome,
    cases: FitnessCaseSet,
    prims: PrimitiveSet,
    mode: str = "multi",
) -> tuple[float, Var | Bin]:
    """Chromosome fitness and the sub-expression that provided it.

    multi: minimum error over every sub-tree; single: the root expression
    only (SS-IFGP).  Either way the tree is evaluated exactly once.
    """
    if mode not in ("multi", "single"):
        raise ValueError(f"unknown fitness mode {mode!r}")
    expr = decode(chrom, prims)
    results = _evaluate(expr.root, cases, prims)
    stacked = np.stack([v for _, v, _ in results])
    with np.errstate(all="ignore"):
        errs = np.abs(stacked - cases.targets).sum(axis=1)
    valid = np.array([ok for _, _, ok in results])
    errs = np.where(valid, errs, np.inf)
    if mode == "single":
        return float(errs[-1]), results[-1][0]  # post-order ends at the root
    idx = int(np.argmin(errs))
    return float(errs[idx]), results[idx][0]


def crossover_at(p1: IfgpChromosome, p2: IfgpChromosome, cut1: int, cut2: int) -> tuple[IfgpChromosome, IfgpChromosome]:
    """Two-point recombination at explicit cut points, 0 <= cut1 < cut2 <= L."""
    if len(p1) != len(p2):
        raise ValueError("parents must have equal length")
    if not 0 <= cut1 < cut2 <= len(p1):
        raise ValueError("cut points must satisfy 0 <= cut1 < cut2 <= length")
    a, b = p1.genes, p2.genes
    o1 = a[:cut1] + b[cut1:cut2] + a[cut2:]
    o2 = b[:cut1] + a[cut1:cut2] + b[cut2:]
    return IfgpChromosome(o1), IfgpChromosome(o2)


def crossover_two_point(p1: IfgpChromosome, p2: IfgpChromosome, rng: RandomSource) -> tuple[IfgpChromosome, IfgpChromosome]:
    """Cut pair drawn uniformly over all distinct point pairs in [0, L]."""
    if len(p1) != len(p2):
        raise ValueError("parents must have equal length")
    while True:
        c1 = rng.randint(len(p1) + 1)
        c2 = rng.randint(len(p1) + 1)
        if c1 != c2:
            break
    if c1 > c2:
        c1, c2 = c2, c1
    return crossover_at(p1, p2, c1, c2)


def mutate(chrom: IfgpChromosome, mutations: int, prims: PrimitiveSet, rng: RandomSource) -> IfgpChromosome:
    """Resample ``mutations`` uniformly chosen genes over the full symbol range."""
    if mutations < 0:
        raise ValueError("mutation count cannot be negative")
    genes = list(chrom.genes)
    for _ in range(mutations):
        pos = rng.randint(len(genes))
        genes[pos] = rng.randint(prims.num_symbols)
    return IfgpChromosome(tuple(genes))
