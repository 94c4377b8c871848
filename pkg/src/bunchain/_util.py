from fractions import Fraction


def label_key(value):
    """Deterministic sort key for heterogeneous labels.

    Decimal strings sort numerically so that "10" follows "9".
    """
    if isinstance(value, bool):
        return (1, int(value), "")
    if isinstance(value, int):
        return (1, value, "")
    if isinstance(value, str) and value.lstrip("-").isdigit():
        return (1, int(value), value)
    if isinstance(value, tuple):
        return (2, 0, tuple(label_key(v) for v in value))
    return (3, 0, repr(value))


def sorted_labels(values):
    return sorted(values, key=label_key)


def jsonable(value):
    """Convert witnesses into plain JSON-compatible values."""
    if value is None or isinstance(value, (bool, int, float, str)):
        return value
    if isinstance(value, Fraction):
        return str(value)
    if hasattr(value, "to_json"):
        return value.to_json()
    if isinstance(value, dict):
        return {str(k) if not isinstance(k, str) else k: jsonable(v) for k, v in value.items()}
    if isinstance(value, (frozenset, set)):
        return [jsonable(v) for v in sorted_labels(value)]
    if isinstance(value, (list, tuple)):
        return [jsonable(v) for v in value]
    return repr(value)
