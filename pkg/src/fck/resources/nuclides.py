"""Nuclide identifiers and the bundled decay table.

Nuclides are plain integers in ZZAAAM form (``Z*10000 + A*10 + M``), so
U-235 is ``922350`` and Am-242m is ``952421``.
"""

from __future__ import annotations

import csv
import logging
import math
import os
import re
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources as importlib_resources
from pathlib import Path

logger = logging.getLogger(__name__)

ENV_DATA = "FCK_NUCLIDE_DATA"

SYMBOLS = (
    "H He Li Be B C N O F Ne Na Mg Al Si P S Cl Ar K Ca Sc Ti V Cr Mn Fe Co "
    "Ni Cu Zn Ga Ge As Se Br Kr Rb Sr Y Zr Nb Mo Tc Ru Rh Pd Ag Cd In Sn Sb "
    "Te I Xe Cs Ba La Ce Pr Nd Pm Sm Eu Gd Tb Dy Ho Er Tm Yb Lu Hf Ta W Re "
    "Os Ir Pt Au Hg Tl Pb Bi Po At Rn Fr Ra Ac Th Pa U Np Pu Am Cm Bk Cf Es "
    "Fm Md No Lr Rf Db Sg Bh Hs Mt Ds Rg Cn Nh Fl Mc Lv Ts Og"
).split()
_Z_OF = {sym.lower(): z for z, sym in enumerate(SYMBOLS, start=1)}

_NAME_RE = re.compile(r"^([A-Za-z]{1,2})-?(\d{1,3})(m\d?)?$")


class NuclideError(ValueError):
    pass


def znum(nuc: int) -> int:
    return nuc // 10000


def anum(nuc: int) -> int:
    return (nuc // 10) % 1000


def make_id(z: int, a: int, meta: int = 0) -> int:
    if not 1 <= z <= 120:
        raise NuclideError(f"atomic number {z} outside [1, 120]")
    if a < z:
        raise NuclideError(f"mass number {a} below atomic number {z}")
    if not 0 <= meta <= 9:
        raise NuclideError(f"metastable index {meta} outside [0, 9]")
    return z * 10000 + a * 10 + meta


def element_z(symbol: str) -> int:
    try:
        return _Z_OF[symbol.lower()]
    except KeyError:
        raise NuclideError(f"unknown element {symbol!r}") from None


def nucid(name: str | int) -> int:
    """Parse ``"U235"``, ``"U-235"``, ``"Am242m"`` or ``922350`` into an id."""
    if isinstance(name, int):
        return make_id(znum(name), anum(name), name % 10)
    text = str(name).strip()
    if text.isdigit():
        value = int(text)
        return make_id(znum(value), anum(value), value % 10)
    match = _NAME_RE.match(text)
    if not match:
        raise NuclideError(f"cannot parse nuclide {name!r}")
    sym, a, meta = match.groups()
    m = 0
    if meta:
        m = int(meta[1:]) if len(meta) > 1 else 1
    return make_id(element_z(sym), int(a), m)


def alias(nuc: int) -> str:
    z, a, m = znum(nuc), anum(nuc), nuc % 10
    sym = SYMBOLS[z - 1] if z <= len(SYMBOLS) else f"E{z}"
    suffix = "" if m == 0 else ("m" if m == 1 else f"m{m}")
    return f"{sym}{a}{suffix}"


@dataclass(frozen=True)
class NuclideData:
    nuc: int
    decay_const: float  # 1/month
    branches: tuple[tuple[int, float], ...] = ()
    atomic_mass: float = 0.0

    @property
    def stable(self) -> bool:
        return self.decay_const == 0.0


@dataclass
class DecayTable:
    """Decay constants, branches and atomic masses keyed by nuclide id.

    Nuclides missing from the table are treated as stable, with their mass
    number standing in for the atomic mass.
    """

    entries: dict[int, NuclideData] = field(default_factory=dict)
    source: str = "<memory>"

    def __contains__(self, nuc: int) -> bool:
        return nuc in self.entries

    def get(self, nuc: int) -> NuclideData:
        data = self.entries.get(nuc)
        if data is None:
            return NuclideData(nuc, 0.0, (), float(anum(nuc)))
        return data

    def decay_const(self, nuc: int) -> float:
        data = self.entries.get(nuc)
        return 0.0 if data is None else data.decay_const

    def atomic_mass(self, nuc: int) -> float:
        return self.get(nuc).atomic_mass

    def daughters(self, nuc: int) -> tuple[tuple[int, float], ...]:
        data = self.entries.get(nuc)
        return () if data is None else data.branches

    @classmethod
    def from_rows(cls, rows, source: str = "<memory>") -> "DecayTable":
        """Build a table from ``(nuclide, half_life, daughter, branch, mass)`` rows.

        ``half_life`` is in months or the word ``stable``. A nuclide with
        several branches appears on several rows sharing the half-life.
        """
        half_lives: dict[int, float] = {}
        masses: dict[int, float] = {}
        branches: dict[int, list[tuple[int, float]]] = {}
        for lineno, row in enumerate(rows, start=1):
            try:
                nuc = nucid(row[0])
                hl_text = row[1].strip().lower()
                half_life = math.inf if hl_text == "stable" else float(hl_text)
                mass = float(row[4])
            except (IndexError, ValueError) as exc:
                raise NuclideError(f"{source}:{lineno}: {exc}") from exc
            if half_life <= 0:
                raise NuclideError(f"{source}:{lineno}: non-positive half-life")
            if nuc in half_lives and half_lives[nuc] != half_life:
                raise NuclideError(f"{source}:{lineno}: inconsistent half-life for {alias(nuc)}")
            half_lives[nuc] = half_life
            masses[nuc] = mass
            daughter = row[2].strip()
            if daughter and daughter != "-":
                if math.isinf(half_life):
                    raise NuclideError(f"{source}:{lineno}: stable {alias(nuc)} has a daughter")
                branches.setdefault(nuc, []).append((nucid(daughter), float(row[3])))

        entries = {}
        for nuc, half_life in half_lives.items():
            lam = 0.0 if math.isinf(half_life) else math.log(2.0) / half_life
            br = tuple(branches.get(nuc, ()))
            if lam > 0.0:
                if not br:
                    raise NuclideError(f"{source}: radioactive {alias(nuc)} has no daughters")
                total = sum(b for _, b in br)
                if abs(total - 1.0) > 1e-9:
                    raise NuclideError(
                        f"{source}: branches of {alias(nuc)} sum to {total!r}, expected 1"
                    )
            entries[nuc] = NuclideData(nuc, lam, br, masses[nuc])
        for nuc, data in entries.items():
            for daughter, _ in data.branches:
                if daughter not in entries:
                    logger.debug("%s: daughter %s of %s not tabulated, treated as stable",
                                 source, alias(daughter), alias(nuc))
        _check_acyclic(entries, source)
        return cls(entries, source)

    @classmethod
    def load(cls, path: str | os.PathLike) -> "DecayTable":
        path = Path(path)
        with path.open(newline="", encoding="utf-8") as fh:
            rows = [r for r in csv.reader(fh, delimiter="\t")
                    if r and not r[0].startswith("#")]
        if rows and rows[0][0].strip().lower() == "nuclide":
            rows = rows[1:]
        return cls.from_rows(rows, source=str(path))


def _check_acyclic(entries: dict[int, NuclideData], source: str) -> None:
    state: dict[int, int] = {}

    def visit(nuc: int) -> None:
        mark = state.get(nuc)
        if mark == 2:
            return
        if mark == 1:
            raise NuclideError(f"{source}: decay cycle through {alias(nuc)}")
        state[nuc] = 1
        data = entries.get(nuc)
        if data is not None:
            for daughter, _ in data.branches:
                visit(daughter)
        state[nuc] = 2

    for nuc in sorted(entries):
        visit(nuc)


def bundled_table_path() -> Path:
    return Path(str(importlib_resources.files("fck.data").joinpath("decay_table.tsv")))


@lru_cache(maxsize=8)
def _load_cached(path: str) -> DecayTable:
    return DecayTable.load(path)


def default_table() -> DecayTable:
    """The decay table named by ``FCK_NUCLIDE_DATA``, else the bundled one."""
    override = os.environ.get(ENV_DATA)
    return _load_cached(override or str(bundled_table_path()))
