"""Multivector text round-trip.

Grammar: ``term (("+"|"-") term)*`` with an optional sign before the first
term; ``term = [number ["*"]] blade?``; ``blade = "e"`` followed by distinct
generator digits.  Numbers are plain decimal floats (no exponent form, which
would collide with blade names like ``e12``).  Whitespace is insignificant.

Blade digits may appear in any order; out-of-order digits pick up the
permutation sign of sorting them, so ``e31`` parses as ``-e13``.  The style
argument only affects formatting: ``canonical`` emits ascending digits,
``cyclic`` relabels the three bivectors of the e1/e2/e3 block as e23, e31,
e12 (the e31 coefficient is the negated e13 one).
"""

from __future__ import annotations

import re
from decimal import Decimal

import numpy as np

from .algebra import Multivector, Signature, blade_label

STYLES = ("canonical", "cyclic")

#: mask -> (label, orientation of the label relative to the canonical blade)
_CYCLIC_LABELS = {0b011: ("e12", 1.0), 0b101: ("e31", -1.0), 0b110: ("e23", 1.0)}

_TOKEN = re.compile(
    r"[ \t]*(?:(?P<blade>e\d+)|(?P<num>\d+\.\d*|\.\d+|\d+)|(?P<op>[+\-*]))"
)


class MVParseError(ValueError):
    """Malformed multivector text; `position` is the 0-based offset."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            raise MVParseError(f"unexpected character {stripped[0]!r}",
                               pos + len(text[pos:]) - len(stripped))
        kind = m.lastgroup
        tokens.append((kind, m.group(kind), m.start(kind)))
        pos = m.end()
    return tokens


def _blade_mask(token: str, pos: int, sig: Signature) -> tuple[int, float]:
    digits = token[1:]
    indices = [int(ch) for ch in digits]
    for k in indices:
        if k < 1 or k > sig.n:
            raise MVParseError(f"unknown blade label {token!r} in {sig}", pos)
    if len(set(indices)) != len(indices):
        raise MVParseError(f"repeated generator index in blade {token!r}", pos)
    # permutation sign of sorting the factor list (e31 = e3 e1 = -e13)
    sign = 1.0
    for i in range(len(indices)):
        for j in range(i + 1, len(indices)):
            if indices[i] > indices[j]:
                sign = -sign
    mask = 0
    for k in indices:
        mask |= 1 << (k - 1)
    return mask, sign


def parse_mv(text: str, sig: Signature) -> Multivector:
    """Parse multivector text like ``"1.5 - 2*e12 + e134"``."""
    tokens = _tokenize(text)
    if not tokens:
        raise MVParseError("empty multivector text", 0)
    coeffs = np.zeros(sig.dim)
    seen: set[int] = set()
    i = 0
    term_sign = 1.0
    # an explicit sign may precede the first term
    if tokens[0][0] == "op" and tokens[0][1] in "+-":
        term_sign = -1.0 if tokens[0][1] == "-" else 1.0
        i = 1
    while True:
        if i >= len(tokens):
            raise MVParseError("expected a term", tokens[-1][2] + len(tokens[-1][1]))
        kind, value, pos = tokens[i]
        number = None
        if kind == "num":
            number = float(value)
            i += 1
            if i < len(tokens) and tokens[i][0] == "op" and tokens[i][1] == "*":
                i += 1
                if i >= len(tokens) or tokens[i][0] != "blade":
                    where = tokens[i][2] if i < len(tokens) else pos + len(value) + 1
                    raise MVParseError("expected a blade after '*'", where)
        mask, blade_sign = 0, 1.0
        if i < len(tokens) and tokens[i][0] == "blade":
            mask, blade_sign = _blade_mask(tokens[i][1], tokens[i][2], sig)
            i += 1
        elif number is None:
            raise MVParseError(f"expected a number or blade, got {value!r}", pos)
        if mask in seen:
            raise MVParseError(f"duplicate blade term {blade_label(mask)!r}", pos)
        seen.add(mask)
        coeffs[mask] = term_sign * (1.0 if number is None else number) * blade_sign
        if i >= len(tokens):
            break
        kind, value, pos = tokens[i]
        if kind != "op" or value not in "+-":
            raise MVParseError(f"expected '+' or '-', got {value!r}", pos)
        term_sign = -1.0 if value == "-" else 1.0
        i += 1
    return Multivector(sig, coeffs)


def _format_number(x: float) -> str:
    if x == int(x) and abs(x) < 1e16:
        return str(int(x))
    r = repr(x)
    if "e" in r or "E" in r:
        # exact decimal expansion; the grammar has no exponent form
        return format(Decimal(x), "f")
    return r


def format_mv(a: Multivector, style: str = "canonical") -> str:
    """Deterministic text form: terms by ascending mask, normalized signs."""
    if style not in STYLES:
        raise ValueError(f"style must be one of {STYLES}, got {style!r}")
    if not np.all(np.isfinite(a.coeffs)):
        raise ValueError("cannot format non-finite coefficients")
    parts: list[str] = []
    for mask in range(a.signature.dim):
        coeff = float(a.coeffs[mask])
        if coeff == 0.0:
            continue
        label = None if mask == 0 else blade_label(mask)
        if style == "cyclic" and mask in _CYCLIC_LABELS:
            label, orient = _CYCLIC_LABELS[mask]
            coeff *= orient
        negative = coeff < 0.0
        mag = -coeff if negative else coeff
        if label is None:
            body = _format_number(mag)
        elif mag == 1.0:
            body = label
        else:
            body = f"{_format_number(mag)}*{label}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f"- {body}" if negative else f"+ {body}")
    if not parts:
        return "0"
    return " ".join(parts)
