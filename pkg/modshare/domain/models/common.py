# modshare/domain/models/common.py
from decimal import Decimal, InvalidOperation, ROUND_HALF_UP
from enum import Enum
from typing import Union


class ModuleKind(str, Enum):
    encoder = "encoder"
    head = "head"


class DeviceTier(str, Enum):
    edge = "edge"
    cloud = "cloud"


class OutputFormat(str, Enum):
    table = "table"
    csv = "csv"
    json = "json"


class Pipelining(str, Enum):
    fine = "fine"
    coarse = "coarse"
    none = "none"


_SUFFIXES = {"K": 10**3, "M": 10**6, "B": 10**9, "G": 10**9}


def parse_param_count(value: Union[int, float, str]) -> int:
    """Accepts 86000000, "86M", "52K" or "1.025B" and returns an exact integer."""
    if isinstance(value, bool):
        raise ValueError("parameter count must be a number")
    if isinstance(value, int):
        return value
    if isinstance(value, float):
        if not value.is_integer():
            raise ValueError(f"parameter count {value} is not integral")
        return int(value)
    text = str(value).strip().replace("_", "")
    scale = 1
    if text and text[-1].upper() in _SUFFIXES:
        scale = _SUFFIXES[text[-1].upper()]
        text = text[:-1]
    try:
        amount = Decimal(text) * scale
    except InvalidOperation:
        raise ValueError(f"invalid parameter count '{value}'")
    if amount != amount.to_integral_value():
        raise ValueError(f"parameter count '{value}' is not integral")
    return int(amount)


def format_params(count: int) -> str:
    if count >= 10**9:
        return f"{Decimal(count) / 10**9:.1f}B"
    if count >= 10**6:
        return f"{_half_up(Decimal(count) / 10**6, 0)}M"
    if count >= 10**3:
        return f"{_half_up(Decimal(count) / 10**3, 0)}K"
    return str(count)


def _half_up(value: Decimal, places: int) -> Decimal:
    return value.quantize(Decimal(1).scaleb(-places), rounding=ROUND_HALF_UP)


def saving_percent(reduced: int, original: int, places: int = 1) -> float:
    """(1 - reduced/original) as a percentage, rounded half-up."""
    if original == 0:
        return 0.0
    ratio = (Decimal(1) - Decimal(reduced) / Decimal(original)) * 100
    return float(_half_up(ratio, places))
