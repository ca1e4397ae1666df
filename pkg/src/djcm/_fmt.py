"""Locale-independent number formatting shared by the writers."""


def fmt(x) -> str:
    """12 significant digits, lowercase exponent."""
    x = float(x)
    if x == 0.0:
        return "0"
    return format(x, ".12g")
