"""Text documents: edge-list graphs, fractional matchings and mixed profiles.

All rationals are written "p/q" in lowest terms with q >= 1, so 1 is "1/1".
"""
import re
from fractions import Fraction
from pathlib import Path
from typing import Iterator, Type, Union

from pydantic import ValidationError

from exceptions import AdGameError, DocumentFormatError, GraphFormatError
from schemas.game import MixedProfile, PureProfile
from schemas.graph import Edge, Graph, canonical_edge
from schemas.matching import FractionalMatching
from logging_config import get_logger

logger = get_logger(__name__)

RATIONAL = re.compile(r"^\d+(/\d+)?$")


def format_rational(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def parse_rational(token: str) -> Fraction:
    if not RATIONAL.match(token):
        raise ValueError(f"'{token}' is not a rational of the form p/q")
    numerator, _, denominator = token.partition("/")
    if denominator and int(denominator) == 0:
        raise ValueError(f"'{token}' has a zero denominator")
    return Fraction(int(numerator), int(denominator or 1))


def _content_lines(text: str) -> Iterator[tuple[int, list[str]]]:
    """(line number, tokens) of every non-blank, non-comment line."""
    for number, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if line and not line.startswith("#"):
            yield number, line.split()


def _first_error(error: ValidationError) -> str:
    return error.errors()[0]["msg"].removeprefix("Value error, ")


def read_document(path: Path, error: Type[AdGameError] = DocumentFormatError) -> str:
    """Read a UTF-8 document; undecodable bytes raise `error`, other OSErrors propagate."""
    try:
        return path.read_text(encoding="utf-8")
    except UnicodeDecodeError as e:
        raise error(f"{path}: not valid UTF-8 (byte {e.start})")


def parse_graph(text: str) -> Graph:
    lines = list(_content_lines(text))
    if not lines:
        raise GraphFormatError("empty graph document: expected header 'n m'")
    number, header = lines[0]
    try:
        n, m = (int(t) for t in header) if len(header) == 2 else (None, None)
    except ValueError:
        n = m = None
    if n is None or n < 0 or m < 0:
        raise GraphFormatError(f"line {number}: malformed header '{' '.join(header)}', expected 'n m'")

    body = lines[1:]
    if len(body) != m:
        raise GraphFormatError(f"header announces {m} edges but the document lists {len(body)}")
    if n > 2 * m:
        raise GraphFormatError(f"isolated vertices: {m} edges cannot touch all {n} vertices")

    seen: set[Edge] = set()
    for number, tokens in body:
        try:
            u, v = (int(t) for t in tokens) if len(tokens) == 2 else (None, None)
        except ValueError:
            u = v = None
        if u is None:
            raise GraphFormatError(f"line {number}: malformed edge '{' '.join(tokens)}', expected 'u v'")
        if u == v:
            raise GraphFormatError(f"line {number}: self-loop at vertex {u}")
        if not (0 <= u < n and 0 <= v < n):
            raise GraphFormatError(f"line {number}: edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
        edge = canonical_edge(u, v)
        if edge in seen:
            raise GraphFormatError(f"line {number}: duplicate edge {edge}")
        seen.add(edge)

    try:
        g = Graph(vertex_count=n, edges=seen)
    except ValidationError as e:
        raise GraphFormatError(_first_error(e))
    logger.debug(f"Parsed graph with {g.vertex_count} vertices and {g.edge_count} edges")
    return g


def format_graph(g: Graph) -> str:
    lines = [f"{g.vertex_count} {g.edge_count}"] + [f"{u} {v}" for u, v in g.edges]
    return "\n".join(lines) + "\n"


def parse_fractional_matching(g: Graph, text: str) -> FractionalMatching:
    weights: dict[Edge, Fraction] = {}
    for number, tokens in _content_lines(text):
        if len(tokens) != 3:
            raise DocumentFormatError(f"line {number}: expected 'u v p/q'")
        try:
            edge = canonical_edge(int(tokens[0]), int(tokens[1]))
            weight = parse_rational(tokens[2])
        except ValueError as e:
            raise DocumentFormatError(f"line {number}: {e}")
        if edge in weights:
            raise DocumentFormatError(f"line {number}: edge {edge} listed twice")
        weights[edge] = weight
    try:
        return FractionalMatching(graph=g, weights=weights)
    except ValidationError as e:
        raise DocumentFormatError(_first_error(e))


def format_fractional_matching(f: FractionalMatching) -> str:
    return "".join(f"{u} {v} {format_rational(w)}\n" for (u, v), w in f.weights.items())


def _parse_entries(number: int, tokens: list[str], arity: int) -> list[tuple[tuple[int, ...], Fraction]]:
    width = arity + 1
    if len(tokens) % width != 0 or not tokens:
        raise DocumentFormatError(f"line {number}: entries must come in groups of {width}")
    entries = []
    try:
        for i in range(0, len(tokens), width):
            key = tuple(int(t) for t in tokens[i : i + arity])
            entries.append((key, parse_rational(tokens[i + arity])))
    except ValueError as e:
        raise DocumentFormatError(f"line {number}: {e}")
    return entries


def parse_profile(g: Graph, text: str) -> MixedProfile:
    """Header 'alpha delta', then alpha lines 'a v p/q ...' and delta lines 'd u v p/q ...'."""
    lines = list(_content_lines(text))
    if not lines:
        raise DocumentFormatError("empty profile document: expected header 'alpha delta'")
    number, header = lines[0]
    if len(header) != 2 or not all(t.isdigit() for t in header):
        raise DocumentFormatError(f"line {number}: malformed header, expected 'alpha delta'")
    alpha, delta = int(header[0]), int(header[1])
    body = lines[1:]
    if len(body) != alpha + delta:
        raise DocumentFormatError(f"header announces {alpha} attackers and {delta} defenders but the document has {len(body)} strategy lines")

    attackers, defenders = [], []
    for index, (number, tokens) in enumerate(body):
        tag = "a" if index < alpha else "d"
        if tokens[0] != tag:
            raise DocumentFormatError(f"line {number}: expected a line starting with '{tag}'")
        arity = 1 if tag == "a" else 2
        strategy: dict = {}
        for key, probability in _parse_entries(number, tokens[1:], arity):
            item = key[0] if arity == 1 else canonical_edge(*key)
            if item in strategy:
                raise DocumentFormatError(f"line {number}: {item} listed twice")
            strategy[item] = probability
        (attackers if tag == "a" else defenders).append(strategy)

    try:
        return MixedProfile(graph=g, attacker_strategies=tuple(attackers), defender_strategies=tuple(defenders))
    except ValidationError as e:
        raise DocumentFormatError(_first_error(e))


def format_profile(p: Union[MixedProfile, PureProfile]) -> str:
    if isinstance(p, PureProfile):
        p = p.to_mixed()
    lines = [f"{p.alpha} {p.delta}"]
    for strategy in p.attacker_strategies:
        lines.append(" ".join(["a"] + [f"{v} {format_rational(x)}" for v, x in strategy.items()]))
    for strategy in p.defender_strategies:
        lines.append(" ".join(["d"] + [f"{u} {v} {format_rational(x)}" for (u, v), x in strategy.items()]))
    return "\n".join(lines) + "\n"
