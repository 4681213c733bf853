"""Atomic constants for the ion species, and the CSV registry that holds them.

The CSV file stores ordinary frequencies (Hz), wavelengths in metres and the
mass in atomic mass units. Everything is converted to SI angular units on
load: ``gamma``, ``omega0`` and ``omega_f`` are in rad/s, ``mass`` in kg.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import IO, Iterable, Optional

from .constants import AMU, C

HEADER = (
    "name",
    "mass_amu",
    "nuclear_spin",
    "gamma_hz",
    "omega0_hz",
    "fs_split_hz",
    "lambda_half_m",
    "lambda_3half_m",
    "branching_f_inverse",
)

_NO_D_LEVEL = ("", "N.A.")

TWO_PI = 2.0 * math.pi


class SpeciesFormatError(ValueError):
    """Raised for a malformed species file; names the offending row and column."""

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        where = []
        if row is not None:
            where.append(f"row {row}")
        if column is not None:
            where.append(f"column {column!r}")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)


class NoDLevelError(ValueError):
    """The species has no low-lying D levels, so D-level errors do not apply."""


@dataclass(frozen=True)
class IonSpecies:
    name: str
    mass: float
    nuclear_spin: Fraction
    gamma: float
    omega0: float
    omega_f: float
    lambda_half: float
    lambda_3half: float
    branching_f: Optional[float] = None

    def __post_init__(self):
        for field in ("mass", "gamma", "omega0", "omega_f", "lambda_half", "lambda_3half"):
            value = getattr(self, field)
            if not (math.isfinite(value) and value > 0):
                raise ValueError(f"{self.name}: {field} must be finite and positive, got {value}")
        if not self.lambda_3half < self.lambda_half:
            raise ValueError(f"{self.name}: lambda_3half must be shorter than lambda_half")
        spin = Fraction(self.nuclear_spin)
        if spin < 0 or (2 * spin).denominator != 1:
            raise ValueError(f"{self.name}: nuclear spin must be a non-negative multiple of 1/2")
        object.__setattr__(self, "nuclear_spin", spin)
        if self.branching_f is not None and not 0.0 < self.branching_f < 1.0:
            raise ValueError(f"{self.name}: branching_f must lie in (0, 1)")

    @property
    def has_d_levels(self) -> bool:
        return self.branching_f is not None

    def require_d_levels(self) -> float:
        """Return ``branching_f``, raising :class:`NoDLevelError` when absent."""
        if self.branching_f is None:
            raise NoDLevelError(f"{self.name} has no low-lying D levels (N.A.)")
        return self.branching_f


def omega_3half(species: IonSpecies) -> float:
    """Angular frequency of the S1/2 -> P3/2 line, 2*pi*c / lambda_3half."""
    return TWO_PI * C / species.lambda_3half


def _parse_float(text: str, row: int, column: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise SpeciesFormatError(f"not a number: {text!r}", row, column) from None
    if not math.isfinite(value):
        raise SpeciesFormatError(f"not finite: {text!r}", row, column)
    return value


def _parse_spin(text: str, row: int) -> Fraction:
    try:
        spin = Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise SpeciesFormatError(f"bad nuclear spin: {text!r}", row, "nuclear_spin") from None
    if spin < 0 or (2 * spin).denominator != 1:
        raise SpeciesFormatError(
            f"nuclear spin must be a multiple of 1/2: {text!r}", row, "nuclear_spin"
        )
    return spin


def _parse_row(fields: list[str], row: int) -> IonSpecies:
    if len(fields) != len(HEADER):
        raise SpeciesFormatError(f"expected {len(HEADER)} columns, found {len(fields)}", row)
    name = fields[0].strip()
    if not name:
        raise SpeciesFormatError("empty species name", row, "name")
    numbers = {
        column: _parse_float(fields[i], row, column)
        for i, column in enumerate(HEADER)
        if column not in ("name", "nuclear_spin", "branching_f_inverse")
    }
    for column, value in numbers.items():
        if value <= 0:
            raise SpeciesFormatError(f"must be positive, got {value}", row, column)

    f_inverse = fields[8].strip()
    branching_f = None
    if f_inverse not in _NO_D_LEVEL:
        inverse = _parse_float(f_inverse, row, "branching_f_inverse")
        if inverse <= 1.0:
            raise SpeciesFormatError(
                f"f^-1 must exceed 1 so that 0 < f < 1, got {inverse}", row, "branching_f_inverse"
            )
        branching_f = 1.0 / inverse

    if not numbers["lambda_3half_m"] < numbers["lambda_half_m"]:
        raise SpeciesFormatError("lambda_3half_m must be below lambda_half_m", row, "lambda_3half_m")

    return IonSpecies(
        name=name,
        mass=numbers["mass_amu"] * AMU,
        nuclear_spin=_parse_spin(fields[2], row),
        gamma=TWO_PI * numbers["gamma_hz"],
        omega0=TWO_PI * numbers["omega0_hz"],
        omega_f=TWO_PI * numbers["fs_split_hz"],
        lambda_half=numbers["lambda_half_m"],
        lambda_3half=numbers["lambda_3half_m"],
        branching_f=branching_f,
    )


def load_registry(source: IO[str]) -> dict[str, IonSpecies]:
    """Parse a species CSV stream into an ordered ``{name: IonSpecies}`` mapping.

    Row numbers in error messages count the header as row 1.
    """
    reader = csv.reader(source)
    try:
        header = next(reader)
    except StopIteration:
        raise SpeciesFormatError("empty file, header missing", 1) from None
    if tuple(h.strip() for h in header) != HEADER:
        raise SpeciesFormatError(f"header must be {','.join(HEADER)!r}", 1)

    registry: dict[str, IonSpecies] = {}
    for row, fields in enumerate(reader, start=2):
        if not fields or all(not f.strip() for f in fields):
            continue
        species = _parse_row(fields, row)
        if species.name in registry:
            raise SpeciesFormatError(f"duplicate species {species.name!r}", row, "name")
        registry[species.name] = species
    return registry


def load_registry_file(path: str | Path) -> dict[str, IonSpecies]:
    with open(path, encoding="utf-8", newline="") as fh:
        return load_registry(fh)


def default_registry() -> dict[str, IonSpecies]:
    """The nine species shipped with the package, in table order."""
    text = resources.files("ionscatter").joinpath("data/species.csv").read_text(encoding="utf-8")
    return load_registry(io.StringIO(text))


def _format_spin(spin: Fraction) -> str:
    return str(spin.numerator) if spin.denominator == 1 else f"{spin.numerator}/{spin.denominator}"


def write_registry(species: Iterable[IonSpecies], sink: IO[str]) -> None:
    """Serialise species back to the CSV format read by :func:`load_registry`."""
    writer = csv.writer(sink, lineterminator="\n")
    writer.writerow(HEADER)
    for s in species:
        writer.writerow(
            [
                s.name,
                repr(s.mass / AMU),
                _format_spin(s.nuclear_spin),
                repr(s.gamma / TWO_PI),
                repr(s.omega0 / TWO_PI),
                repr(s.omega_f / TWO_PI),
                repr(s.lambda_half),
                repr(s.lambda_3half),
                "" if s.branching_f is None else repr(1.0 / s.branching_f),
            ]
        )
