import re
from typing import Any, Iterable, Sequence
from fractions import Fraction

# Exact rational as written in every document: "p" or "p/q"
RATIONAL_PATTERN = re.compile(r'^-?\d+(/\d+)?$')


def rational(value: Any) -> str:
    """Renders an exact rational as "p" or "p/q".

    :param value: Integer or Fraction.
    :type value: Any
    :return: The rational string, never a float.
    :rtype: str
    """
    value = Fraction(value)
    return str(value.numerator) if value.denominator == 1 else f'{value.numerator}/{value.denominator}'


def parse_rational(text: str) -> Fraction:
    """Parses "p" or "p/q" strictly.

    :param text: Rational string.
    :type text: str
    :raises ValueError: The string is not a rational of that form.
    :rtype: Fraction
    """
    text = str(text).strip()
    if not RATIONAL_PATTERN.match(text):
        raise ValueError(f'not an exact rational: {text!r}')
    return Fraction(text)


def rationals(values: Iterable) -> list[str]:
    return [rational(value) for value in values]


def bracket(values: Iterable) -> str:
    """Wraps rationals in brackets, the way Kac coordinates are written: [1/4, 1/4, 1/4, 1/4]"""
    return '[' + ', '.join(rationals(values)) + ']'


def coweight_combination(coefficients: Sequence) -> str:
    """Writes a point from its ϖ^∨-coordinates, e.g. '1/3 w1 + 1/3 w3'; '0' for the origin.

    :param coefficients: Values (α_i, x) for i = 1..n.
    :type coefficients: Sequence
    :rtype: str
    """
    terms = []
    for i, c in enumerate(coefficients, start=1):
        c = Fraction(c)
        if c == 0:
            continue
        sign = '-' if c < 0 else '+'
        magnitude = '' if abs(c) == 1 else f'{rational(abs(c))} '
        terms.append(f'{sign} {magnitude}w{i}')
    if not terms:
        return '0'
    text = ' '.join(terms)
    return text[2:] if text.startswith('+ ') else '-' + text[2:]


def tsv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Tab separated table with a header line"""
    lines = ['\t'.join(header)]
    lines.extend('\t'.join(str(cell) for cell in row) for row in rows)
    return '\n'.join(lines)


def pretty_table(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    """Left-aligned table padded to the widest cell of each column"""
    rows = [[str(cell) for cell in row] for row in rows]
    widths = [max([len(title)] + [len(row[k]) for row in rows]) for k, title in enumerate(header)]
    lines = ['  '.join(title.ljust(width) for title, width in zip(header, widths)).rstrip()]
    lines.append('  '.join('-' * width for width in widths))
    lines.extend('  '.join(cell.ljust(width) for cell, width in zip(row, widths)).rstrip() for row in rows)
    return '\n'.join(lines)
