import io
import math
from fractions import Fraction

import pytest

from ionscatter.constants import AMU, CONSTANTS
from ionscatter.species import (
    HEADER,
    IonSpecies,
    NoDLevelError,
    SpeciesFormatError,
    load_registry,
    omega_3half,
    write_registry,
)

from reference_tables import SPECIES

HEADER_LINE = ",".join(HEADER) + "\n"


def parse(*rows):
    return load_registry(io.StringIO(HEADER_LINE + "".join(r + "\n" for r in rows)))


def test_pinned_constants():
    assert CONSTANTS.hbar == 1.054571817e-34
    assert CONSTANTS.c == 299792458.0
    assert CONSTANTS.epsilon0 == 8.8541878128e-12
    assert CONSTANTS.amu == 1.66053906660e-27


def test_beryllium_row_units():
    reg = parse("9Be+,9.012182,3/2,19.6e6,1.25e9,0.198e12,313.1e-9,313.0e-9,")
    be = reg["9Be+"]
    assert be.gamma == pytest.approx(2 * math.pi * 19.6e6, rel=1e-15)
    assert be.omega0 == pytest.approx(2 * math.pi * 1.25e9, rel=1e-15)
    assert be.omega_f == pytest.approx(2 * math.pi * 0.198e12, rel=1e-15)
    assert be.mass == pytest.approx(9.012182 * AMU, rel=1e-15)
    assert be.nuclear_spin == Fraction(3, 2)
    assert be.branching_f is None
    assert not be.has_d_levels


def test_branching_inverse_column():
    reg = parse("43Ca+,43,7/2,22.5e6,3.23e9,6.68e12,396.8e-9,393.4e-9,17")
    assert reg["43Ca+"].branching_f == pytest.approx(1 / 17)


def test_na_marker_means_no_d_level():
    reg = parse("9Be+,9,3/2,19.6e6,1.25e9,0.198e12,313.1e-9,313.0e-9,N.A.")
    with pytest.raises(NoDLevelError):
        reg["9Be+"].require_d_levels()


def test_header_only_is_empty():
    assert parse() == {}


def test_wrong_header_rejected():
    with pytest.raises(SpeciesFormatError, match="row 1"):
        load_registry(io.StringIO("name,mass\n"))


@pytest.mark.parametrize(
    "row, column",
    [
        ("9Be+,9,3/2,fast,1.25e9,0.198e12,313.1e-9,313.0e-9,", "gamma_hz"),
        ("9Be+,9,3/2,19.6e6,1.25e9,0.198e12,313.1e-9,313.0e-9,-4", "branching_f_inverse"),
        ("9Be+,9,3/4,19.6e6,1.25e9,0.198e12,313.1e-9,313.0e-9,", "nuclear_spin"),
        ("9Be+,9,3/2,19.6e6,1.25e9,-0.198e12,313.1e-9,313.0e-9,", "fs_split_hz"),
        ("9Be+,9,3/2,19.6e6,1.25e9,0.198e12,313.0e-9,313.1e-9,", "lambda_3half_m"),
    ],
)
def test_bad_field_names_row_and_column(row, column):
    with pytest.raises(SpeciesFormatError) as info:
        parse(row)
    assert info.value.row == 2
    assert info.value.column == column
    assert column in str(info.value)


def test_wrong_column_count():
    with pytest.raises(SpeciesFormatError, match="row 2"):
        parse("9Be+,9,3/2,19.6e6")


def test_duplicate_name():
    row = "9Be+,9,3/2,19.6e6,1.25e9,0.198e12,313.1e-9,313.0e-9,"
    with pytest.raises(SpeciesFormatError, match="duplicate") as info:
        parse(row, row)
    assert info.value.row == 3


def test_default_registry_order(registry):
    assert list(registry) == SPECIES
    assert [s.name for s in registry.values() if s.has_d_levels] == [
        "43Ca+", "87Sr+", "137Ba+", "171Yb+", "199Hg+"
    ]


def test_round_trip(registry):
    buf = io.StringIO()
    write_registry(registry.values(), buf)
    reloaded = load_registry(io.StringIO(buf.getvalue()))
    assert list(reloaded) == list(registry)
    for name, s in registry.items():
        r = reloaded[name]
        assert r.nuclear_spin == s.nuclear_spin
        for field in ("mass", "gamma", "omega0", "omega_f", "lambda_half", "lambda_3half"):
            assert getattr(r, field) == pytest.approx(getattr(s, field), rel=1e-12)
        if s.branching_f is None:
            assert r.branching_f is None
        else:
            assert r.branching_f == pytest.approx(s.branching_f, rel=1e-12)


def test_fine_structure_dwarfs_hyperfine(registry):
    for s in registry.values():
        assert s.omega_f / s.omega0 > 100


# 2 pi c / lambda evaluated at 30 digits with the pinned c
@pytest.mark.parametrize("name, expected", [("9Be+", 6.018056125587391e15), ("199Hg+", 1.1416070104902141e16)])
def test_omega_3half(registry, name, expected):
    assert omega_3half(registry[name]) == pytest.approx(expected, rel=1e-14)


def test_omega_3half_scales_inversely(be):
    from dataclasses import replace

    doubled = replace(be, lambda_half=2 * be.lambda_half, lambda_3half=2 * be.lambda_3half)
    assert omega_3half(doubled) == 0.5 * omega_3half(be)


def test_species_invariants_enforced():
    with pytest.raises(ValueError):
        IonSpecies("x", 1e-26, Fraction(1, 2), 1.0, 1.0, 1.0, 300e-9, 310e-9)
    with pytest.raises(ValueError):
        IonSpecies("x", 1e-26, Fraction(1, 2), 1.0, 1.0, 1.0, 310e-9, 300e-9, branching_f=1.5)
