"""Candidate root-formula language: parsing, evaluation, branch tracking.

The language covers exactly the function class a radical formula may use:
coefficients of a monic polynomial, complex constants, field operations,
integer powers, the entire primitives exp/sin/cos, and nested radicals
``root(n, f)`` with n >= 2.  The logarithm is deliberately excluded: it
is multivalued and outside the admitted class.

Grammar (ASCII, whitespace insignificant):

    expr   := term (('+' | '-') term)* ;
    term   := factor (('*' | '/') factor)* ;
    factor := atom ('^' INT)? ;
    atom   := NUMBER | 'i' | COEFF | '(' expr ')' | FUNC '(' expr ')'
            | 'root' '(' INT ',' expr ')' | '-' atom ;
    COEFF  := 'a' INT ;   FUNC := 'exp' | 'sin' | 'cos' ;

A radical node carries a stable id so branch state can be assigned per
node.  For a non-zero radicand z = r e^{i theta} the n admissible values
are w_k = r^{1/n} e^{i (theta + 2 k pi) / n} for k = 0 .. n-1; tracking
along a path keeps w continuous by accumulating the radicand's argument,
so a loop whose radicand winds m times about 0 shifts k by m (mod n).
"""

from __future__ import annotations

import cmath
import math
import re
from dataclasses import dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .paths import ComplexPath, polar
from .polynomials import CoefficientPath, MonicPolynomial

DEFAULT_EXPR_CLOSURE_TOL = 1e-6
DEFAULT_EXCLUSION_REL = 1e-8


class ExpressionSyntaxError(ValueError):
    """Syntax error with a character position into the source text."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class EvaluationError(ValueError):
    """Singular evaluation: division by zero or an invalid binding."""


class BranchTrackingError(RuntimeError):
    """Branch continuation failed; carries the parameter and node id."""

    def __init__(self, message: str, t: float, node_id: Optional[str] = None):
        super().__init__(message)
        self.t = t
        self.node_id = node_id


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Const:
    value: complex


@dataclass(frozen=True)
class CoeffRef:
    index: int


@dataclass(frozen=True)
class Neg:
    child: "Node"


@dataclass(frozen=True)
class BinOp:
    op: str  # '+', '-', '*', '/'
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: int


@dataclass(frozen=True)
class Call:
    func: str  # 'exp', 'sin', 'cos'
    arg: "Node"


@dataclass(frozen=True)
class Radical:
    index: int
    radicand: "Node"
    node_id: str


Node = Union[Const, CoeffRef, Neg, BinOp, Pow, Call, Radical]

_FUNCS = {"exp": cmath.exp, "sin": cmath.sin, "cos": cmath.cos}
_NP_FUNCS = {"exp": np.exp, "sin": np.sin, "cos": np.cos}


def _walk(node: Node):
    yield node
    if isinstance(node, Neg):
        yield from _walk(node.child)
    elif isinstance(node, BinOp):
        yield from _walk(node.left)
        yield from _walk(node.right)
    elif isinstance(node, Pow):
        yield from _walk(node.base)
    elif isinstance(node, Call):
        yield from _walk(node.arg)
    elif isinstance(node, Radical):
        yield from _walk(node.radicand)


@dataclass(frozen=True)
class Expression:
    """A parsed candidate formula over the coefficients of one polynomial."""

    root: Node
    text: str

    def nesting_depth(self) -> int:
        def depth(node: Node) -> int:
            if isinstance(node, Radical):
                return 1 + depth(node.radicand)
            if isinstance(node, Neg):
                return depth(node.child)
            if isinstance(node, BinOp):
                return max(depth(node.left), depth(node.right))
            if isinstance(node, Pow):
                return depth(node.base)
            if isinstance(node, Call):
                return depth(node.arg)
            return 0
        return depth(self.root)

    def coefficient_indices(self) -> frozenset:
        return frozenset(n.index for n in _walk(self.root) if isinstance(n, CoeffRef))

    def radicals(self) -> tuple:
        """Radical nodes in parse order."""
        return tuple(n for n in _walk(self.root) if isinstance(n, Radical))


# ---------------------------------------------------------------------------
# Tokenizer / parser
# ---------------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^(),])
""", re.VERBOSE)


@dataclass
class _Token:
    kind: str
    text: str
    pos: int


def _tokenize(text: str) -> list:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ExpressionSyntaxError(f"unexpected character {text[pos]!r}", pos)
        pos = m.end()
        if m.lastgroup == "ws":
            continue
        tokens.append(_Token(m.lastgroup, m.group(), m.start()))
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.radical_count = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str) -> _Token:
        tok = self.peek()
        if tok.text != text:
            raise ExpressionSyntaxError(f"expected {text!r}, found {tok.text!r}", tok.pos)
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            raise ExpressionSyntaxError(f"unexpected trailing input {tok.text!r}", tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek().text in ("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek().text in ("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        node = self.atom()
        if self.peek().text == "^":
            self.advance()
            tok = self.peek()
            if tok.kind != "number" or not tok.text.isdigit():
                raise ExpressionSyntaxError("exponent must be an integer literal", tok.pos)
            self.advance()
            node = Pow(node, int(tok.text))
        return node

    def atom(self) -> Node:
        tok = self.peek()
        if tok.text == "-":
            self.advance()
            return Neg(self.atom())
        if tok.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        if tok.kind == "number":
            self.advance()
            return Const(complex(float(tok.text)))
        if tok.kind == "name":
            return self.named_atom()
        raise ExpressionSyntaxError(f"expected a value, found {tok.text!r}", tok.pos)

    def named_atom(self) -> Node:
        tok = self.advance()
        name = tok.text
        if name == "i":
            return Const(1j)
        if name in _FUNCS:
            self.expect("(")
            arg = self.expr()
            self.expect(")")
            return Call(name, arg)
        if name == "root":
            self.expect("(")
            idx_tok = self.peek()
            if idx_tok.kind != "number" or not idx_tok.text.isdigit():
                raise ExpressionSyntaxError("radical index must be an integer literal",
                                            idx_tok.pos)
            index = int(idx_tok.text)
            if index < 2:
                raise ExpressionSyntaxError(f"radical index must be >= 2, got {index}",
                                            idx_tok.pos)
            self.advance()
            self.expect(",")
            radicand = self.expr()
            self.expect(")")
            node_id = f"r{self.radical_count}"
            self.radical_count += 1
            return Radical(index, radicand, node_id)
        m = re.fullmatch(r"a(\d+)", name)
        if m:
            return CoeffRef(int(m.group(1)))
        raise ExpressionSyntaxError(f"unknown name {name!r}", tok.pos)


def parse(text: str, degree: Optional[int] = None) -> Expression:
    """Parse a formula; optionally validate coefficient indices < degree."""
    expr = Expression(_Parser(text).parse(), text)
    if degree is not None:
        bad = sorted(k for k in expr.coefficient_indices() if k >= degree)
        if bad:
            raise EvaluationError(
                f"coefficient a{bad[0]} is out of range for degree {degree}")
    return expr


# ---------------------------------------------------------------------------
# Radical values and static evaluation
# ---------------------------------------------------------------------------

def nth_roots(z: complex, n: int) -> list:
    """The n admissible values w with w**n == z, ordered by branch index k.

    Zero is degenerate: every branch collapses to 0, returned n times.
    """
    if n < 1:
        raise ValueError("root index must be >= 1")
    z = complex(z)
    if n == 1:
        return [z]
    if z == 0:
        return [0j] * n
    r, theta = polar(z)
    mag = r ** (1.0 / n)
    return [mag * cmath.exp(1j * (theta + 2 * math.pi * k) / n) for k in range(n)]


def branch_value(z: complex, n: int, k: int) -> complex:
    """The k-th branch value of the n-th root at a point."""
    if not (0 <= k < n):
        raise ValueError(f"branch index {k} out of range for index {n}")
    z = complex(z)
    if z == 0:
        return 0j
    r, theta = polar(z)
    return (r ** (1.0 / n)) * cmath.exp(1j * (theta + 2 * math.pi * k) / n)


@dataclass(frozen=True)
class BranchAssignment:
    """Per-radical branch state: index k and accumulated radicand argument."""

    branches: dict
    theta: dict

    def branch_of(self, node_id: str) -> int:
        return self.branches[node_id]

    def same_branches(self, other: "BranchAssignment") -> bool:
        return self.branches == other.branches


def default_branches(expr: Expression, poly: MonicPolynomial) -> BranchAssignment:
    """Branch k=0 for every radical, with principal radicand arguments."""
    branches = {rad.node_id: 0 for rad in expr.radicals()}
    assignment = BranchAssignment(branches, {})
    theta = {}
    for rad in expr.radicals():
        val = eval_at(Expression(rad.radicand, expr.text), poly, assignment)
        theta[rad.node_id] = polar(val).theta
    return BranchAssignment(branches, theta)


def eval_at(expr: Expression, poly: MonicPolynomial,
            branches: BranchAssignment) -> complex:
    """Evaluate bottom-up at one polynomial with assigned radical branches."""
    indices = expr.coefficient_indices()
    if indices and max(indices) >= poly.degree:
        raise EvaluationError(
            f"coefficient a{max(indices)} is out of range for degree {poly.degree}")

    def ev(node: Node) -> complex:
        if isinstance(node, Const):
            return node.value
        if isinstance(node, CoeffRef):
            return poly.coeffs[node.index]
        if isinstance(node, Neg):
            return -ev(node.child)
        if isinstance(node, BinOp):
            a, b = ev(node.left), ev(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if b == 0:
                raise EvaluationError("division by zero")
            return a / b
        if isinstance(node, Pow):
            return ev(node.base) ** node.exponent
        if isinstance(node, Call):
            return _FUNCS[node.func](ev(node.arg))
        if isinstance(node, Radical):
            val = ev(node.radicand)
            try:
                k = branches.branch_of(node.node_id)
            except KeyError:
                raise EvaluationError(
                    f"branch assignment missing radical node {node.node_id}") from None
            return branch_value(val, node.index, k)
        raise EvaluationError(f"unknown node {type(node).__name__}")

    return ev(expr.root)


# ---------------------------------------------------------------------------
# Branch tracking along paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BranchTrack:
    """Continuous n-th root selection along one radicand path."""

    endpoint: complex
    k_end: int
    winding: float  # net turns of the radicand about 0
    t: np.ndarray
    values: np.ndarray
    radicand: np.ndarray


def _accumulate_argument(z: np.ndarray, t: np.ndarray, n: int,
                         exclusion: float,
                         node_id: Optional[str] = None) -> tuple:
    """Per-sample accumulated argument of ``z``, refining linearly as needed.

    Subdivides each polyline segment until every piece turns by less than
    pi/(2n), so the continuous argument (and hence the branch) cannot be
    misread.  Raises when the polyline passes within the exclusion radius
    of 0.
    """
    for j, v in enumerate(z):
        if abs(v) <= exclusion:
            raise BranchTrackingError(
                f"radicand within exclusion radius {exclusion:g} of 0 at t={t[j]:g}",
                t=float(t[j]), node_id=node_id)
    limit = math.pi / (2.0 * n)
    theta = np.empty(len(z))
    theta[0] = polar(complex(z[0])).theta
    for j in range(len(z) - 1):
        a, b = complex(z[j]), complex(z[j + 1])
        acc = 0.0
        stack = [(a, b)]
        while stack:
            u, v = stack.pop()
            d = cmath.phase(v / u)
            if abs(d) < limit:
                acc += d
                continue
            mid = 0.5 * (u + v)
            if abs(mid) <= exclusion:
                raise BranchTrackingError(
                    f"radicand within exclusion radius {exclusion:g} of 0 "
                    f"between t={t[j]:g} and t={t[j + 1]:g}",
                    t=float(t[j]), node_id=node_id)
            stack.append((mid, v))
            stack.append((u, mid))
        theta[j + 1] = theta[j] + acc
    return theta


def track_branch(path: ComplexPath, n: int, k0: int, *,
                 exclusion_rel: float = DEFAULT_EXCLUSION_REL) -> BranchTrack:
    """Continuous n-th root of a path avoiding 0, from branch ``k0``.

    Returns the endpoint value, the branch index at the endpoint, and the
    radicand's net winding in turns; the winding of a closed path shifts
    the branch cyclically, k_end = (k0 + winding) mod n.
    """
    if n < 1:
        raise ValueError("root index must be >= 1")
    if not (0 <= k0 < n):
        raise ValueError(f"initial branch {k0} out of range for index {n}")
    scale = max(1.0, float(np.max(np.abs(path.z))))
    exclusion = exclusion_rel * scale
    theta = _accumulate_argument(path.z, path.t, n, exclusion)
    offset = 2.0 * math.pi * k0
    values = np.abs(path.z) ** (1.0 / n) * np.exp(1j * (theta + offset) / n)
    winding = (theta[-1] - theta[0]) / (2.0 * math.pi)
    principal_end = polar(complex(path.z[-1])).theta
    k_end = (k0 + round((theta[-1] - principal_end) / (2.0 * math.pi))) % n
    return BranchTrack(endpoint=complex(values[-1]), k_end=int(k_end),
                       winding=float(winding), t=path.t, values=values,
                       radicand=path.z)


# ---------------------------------------------------------------------------
# Expression tracking along coefficient paths
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExpressionTrack:
    """A formula's continuous image along a coefficient path.

    ``closed`` requires both the geometric return of the value path and
    the return of every radical's branch index; the two are reported
    separately because a formula can close geometrically while its
    branch state has cycled, and vice versa.
    """

    value_path: ComplexPath
    initial_branches: BranchAssignment
    final_branches: BranchAssignment
    closed: bool
    radicand_winding: dict
    value_gap: float
    radical_values: dict


class _RefineRequest(Exception):
    def __init__(self, intervals):
        self.intervals = intervals


def _eval_over_grid(expr: Expression, t: np.ndarray, coeff_arrays: Sequence[np.ndarray],
                    init: BranchAssignment, exclusion_rel: float) -> tuple:
    """Evaluate the AST over a whole grid with sequential branch tracking.

    Raises _RefineRequest listing grid intervals whose radicand argument
    step is too large to continue a branch safely.
    """
    m = len(t)
    windings: dict = {}
    final_k: dict = {}
    final_theta: dict = {}
    radical_values: dict = {}
    refine: set = set()

    def ev(node: Node) -> np.ndarray:
        if isinstance(node, Const):
            return np.full(m, node.value)
        if isinstance(node, CoeffRef):
            return coeff_arrays[node.index]
        if isinstance(node, Neg):
            return -ev(node.child)
        if isinstance(node, BinOp):
            a, b = ev(node.left), ev(node.right)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            bscale = max(1.0, float(np.max(np.abs(b))))
            tiny = np.abs(b) <= 1e-12 * bscale
            if np.any(tiny):
                j = int(np.argmax(tiny))
                raise EvaluationError(
                    f"division by (near-)zero at t={t[j]:g}")
            return a / b
        if isinstance(node, Pow):
            return ev(node.base) ** node.exponent
        if isinstance(node, Call):
            return _NP_FUNCS[node.func](ev(node.arg))
        if isinstance(node, Radical):
            f = ev(node.radicand)
            n = node.index
            scale = max(1.0, float(np.max(np.abs(f))))
            exclusion = exclusion_rel * scale
            low = np.abs(f) <= exclusion
            if np.any(low):
                j = int(np.argmax(low))
                raise BranchTrackingError(
                    f"radicand of {node.node_id} within exclusion radius "
                    f"{exclusion:g} of 0 at t={t[j]:g}",
                    t=float(t[j]), node_id=node.node_id)
            steps = np.angle(f[1:] / f[:-1])
            limit = math.pi / (2.0 * n)
            bad = np.nonzero(np.abs(steps) >= limit)[0]
            if len(bad):
                refine.update(int(b) for b in bad)
                raise _RefineRequest(sorted(refine))
            k0 = init.branch_of(node.node_id)
            theta0 = polar(complex(f[0])).theta
            theta = theta0 + np.concatenate([[0.0], np.cumsum(steps)])
            w = np.abs(f) ** (1.0 / n) * np.exp(1j * (theta + 2 * math.pi * k0) / n)
            windings[node.node_id] = float((theta[-1] - theta[0]) / (2 * math.pi))
            principal_end = polar(complex(f[-1])).theta
            final_k[node.node_id] = int(
                (k0 + round((theta[-1] - principal_end) / (2 * math.pi))) % n)
            final_theta[node.node_id] = float(theta[-1])
            radical_values[node.node_id] = w
            return w
        raise EvaluationError(f"unknown node {type(node).__name__}")

    values = ev(expr.root)
    if refine:
        raise _RefineRequest(sorted(refine))
    return values, windings, final_k, final_theta, radical_values


def track_expression(expr: Expression, cpath: CoefficientPath,
                     init: Optional[BranchAssignment] = None, *,
                     closure_tol: float = DEFAULT_EXPR_CLOSURE_TOL,
                     exclusion_rel: float = DEFAULT_EXCLUSION_REL,
                     max_rounds: int = 30) -> ExpressionTrack:
    """Track a formula's value continuously along a coefficient path.

    Radical branches are continued by accumulated-argument bookkeeping;
    when the radicand's argument moves too fast between grid samples, the
    grid is refined by evaluating the coefficients at inserted midpoints
    (linear interpolation of the coefficient polyline) and the whole
    expression is re-evaluated, so nested radicals always see a
    branch-resolved radicand.
    """
    indices = expr.coefficient_indices()
    if indices and max(indices) >= cpath.degree:
        raise EvaluationError(
            f"coefficient a{max(indices)} is out of range for degree {cpath.degree}")
    if init is None:
        init = default_branches(expr, cpath.polynomial_at(0))
    else:
        missing = [rad.node_id for rad in expr.radicals()
                   if rad.node_id not in init.branches]
        if missing:
            raise EvaluationError(f"branch assignment missing nodes {missing}")

    t = np.asarray(cpath.t, dtype=float)
    arrays = list(cpath.coeffs)

    for _ in range(max_rounds):
        try:
            values, windings, final_k, final_theta, radical_values = _eval_over_grid(
                expr, t, arrays, init, exclusion_rel)
        except _RefineRequest as req:
            mids = np.array([0.5 * (t[j] + t[j + 1]) for j in req.intervals])
            new_t = np.union1d(t, mids)
            if len(new_t) == len(t):
                raise BranchTrackingError(
                    "grid refinement underflow while tracking branches",
                    t=float(t[req.intervals[0]]))
            resampled = cpath.resampled(new_t)
            t = resampled.t
            arrays = list(resampled.coeffs)
            continue
        break
    else:
        raise BranchTrackingError(
            f"branch tracking did not settle after {max_rounds} refinement rounds",
            t=float(t[0]))

    value_path = ComplexPath(_normalized_grid(t), values)
    gap = abs(complex(values[-1] - values[0]))
    final = BranchAssignment(final_k, final_theta)
    # branch return is judged on the accumulated winding, which is immune
    # to the principal-angle flip when a radicand endpoint sits exactly on
    # the negative real axis (there the endpoint k-label itself is a
    # convention); a shifted branch means a winding that is a non-multiple
    # of the radical index
    branches_return = all(
        round(windings[rad.node_id]) % rad.index == 0
        for rad in expr.radicals())
    closed = gap <= closure_tol and branches_return
    return ExpressionTrack(value_path=value_path, initial_branches=init,
                           final_branches=final, closed=bool(closed),
                           radicand_winding=windings, value_gap=float(gap),
                           radical_values=radical_values)


def _normalized_grid(t: np.ndarray) -> np.ndarray:
    """Rescale a grid to [0, 1] exactly (paths demand those endpoints)."""
    if t[0] == 0.0 and t[-1] == 1.0:
        return t
    out = (t - t[0]) / (t[-1] - t[0])
    out[0] = 0.0
    out[-1] = 1.0
    return out
