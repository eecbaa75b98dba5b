"""Bundled best-known container radii for benchmark instance sizes.

These are the published reference radii this solver is benchmarked against,
kept verbatim to all printed decimal places. Instance sizes outside this
table need an explicit radius.
"""

from __future__ import annotations

# n -> radius, exact decimal strings.
RADIUS_STRINGS = {
    100: "11.0821497243",
    200: "15.4632748785",
    210: "15.8792012772",
    220: "16.2253735494",
    230: "16.5964300724",
    240: "16.8971658948",
    250: "17.2629622393",
    260: "17.6049551932",
    270: "17.8872656677",
    280: "18.2472267427",
    290: "18.5493750704",
    300: "18.8135833638",
    310: "19.1848594632",
    320: "19.4562307640",
    400: "21.6895717951",
    500: "24.1329376240",
    600: "26.4274162694",
    700: "28.4958443164",
    800: "30.4212133790",
    900: "32.2330843545",
    1000: "33.9571409147",
    1100: "35.6161932968",
    1200: "37.1121608416",
    1300: "38.6047666608",
    1400: "40.0604065845",
    1500: "41.4126836805",
}

BEST_KNOWN_RADII = {n: float(r) for n, r in RADIUS_STRINGS.items()}


class UnknownInstanceError(LookupError):
    """No bundled radius exists for the requested circle count."""


def best_known_radius(n: int) -> float:
    try:
        return BEST_KNOWN_RADII[n]
    except KeyError:
        raise UnknownInstanceError(
            f"no bundled container radius for n={n}; pass a radius explicitly"
        ) from None


def bundled_sizes() -> tuple:
    return tuple(sorted(BEST_KNOWN_RADII))
