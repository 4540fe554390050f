from fractions import Fraction
import hashlib
import re
from typing import Any, Sequence


def get_regex_group(
    x: str,
    pattern: str | re.Pattern[str],
    group: int = 1,
    if_none: Any = None
) -> Any:
    """
    Extracts a specified group from a regex match within a given string.

    Parameters
    ----------
    x : str
        The input string to search for the regex pattern.
    pattern : str or re.Pattern
        The regex pattern used to search within the input string.
    group : int, optional
        The group number to extract from the match, defaults to 1.
    if_none : Any, optional
        The value to return if no match is found, defaults to None.

    Returns
    -------
    Any
        The specified regex group if a match is found, otherwise returns `if_none`.
    """
    if isinstance(pattern, re.Pattern):
        match = pattern.search(x)
    else:
        match = re.search(pattern, x, flags=re.MULTILINE)
    if match is None:
        return if_none
    return match.group(group)

def matches_any(x: str, patterns: Sequence[str | re.Pattern[str]]) -> bool:
    """
    Checks whether any of the given patterns matches somewhere in a string.

    Parameters
    ----------
    x : str
        The input string to search.
    patterns : Sequence[str | re.Pattern[str]]
        The regex patterns to try, in order.

    Returns
    -------
    bool
        True if at least one pattern matches.
    """
    return any(
        p.search(x) if isinstance(p, re.Pattern) else re.search(p, x, flags=re.MULTILINE)
        for p in patterns
    )

def quote_and_join(strings: Sequence[str], sep=', '):
    """
    Joins a list of strings with a separator, single-quoting each string.

    Parameters
    ----------
    strings : Sequence[str]
        The list of strings to join.
    sep : str, optional
        The separator to use when joining the strings, defaults to ', '.

    Returns
    -------
    str
        The joined string.
    """
    return sep.join(f"'{s}'" for s in strings)

def smart_join(strings: Sequence[str]):
    """
    Joins a list of strings into a single string formatted in a human-readable way.

    Parameters
    ----------
    strings : Sequence[str]
        The list of strings to join.

    Returns
    -------
    str
        A single string with the elements joined. If the list is empty, returns an
        empty string. If there is one element, returns the element quoted. If there
        are two elements, joins them with 'and'. For more than two elements, joins
        all but the last with commas, and the last with 'and'.
    """
    if not strings:
        return ''
    elif len(strings) == 1:
        return f"'{strings[0]}'"
    elif len(strings) == 2:
        return quote_and_join(strings, ' and ')
    else:
        return quote_and_join(strings[:-1], ', ') + ' and ' + f"'{strings[-1]}'"

def derive_seed(seed: int, *parts: object) -> int:
    """
    Derives an independent 64-bit seed from a base seed and any number of parts.

    Parameters
    ----------
    seed : int
        The base seed.
    *parts : object
        Values that identify the derived stream, e.g. a candidate index.

    Returns
    -------
    int
        A nonnegative integer below 2**64.
    """
    h = hashlib.blake2b(digest_size=8)
    h.update(str(seed).encode('utf-8'))
    for part in parts:
        h.update(b'|')
        h.update(str(part).encode('utf-8'))
    return int.from_bytes(h.digest(), byteorder='big', signed=False)

def ratio(part: int, total: int) -> Fraction:
    """Exact ratio of two counts, 0 when the total is 0."""
    if total == 0:
        return Fraction(0)
    return Fraction(part, total)

def format_percent(value: Fraction) -> str:
    """
    Formats an exact ratio as a percentage with one decimal.

    Parameters
    ----------
    value : Fraction
        The ratio, typically in [0, 1].

    Returns
    -------
    str
        The percentage, e.g. '75.0'. Halves round away from zero.
    """
    tenths = value * 1000
    rounded = int(tenths + Fraction(1, 2)) if tenths >= 0 else -int(-tenths + Fraction(1, 2))
    sign = '-' if rounded < 0 else ''
    rounded = abs(rounded)
    return f'{sign}{rounded // 10}.{rounded % 10}'
