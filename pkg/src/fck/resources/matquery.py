"""Read-only queries on a material's isotopics."""

from __future__ import annotations

from fck.resources.materials import Material
from fck.resources.nuclides import nucid, znum


class MatQuery:
    """Mass/atom fractions, moles and masses of a material.

    Nuclides that are not present (or unknown to the decay table) report
    zero rather than raising. Quantities are kg; moles use g/mol masses.
    """

    def __init__(self, mat: Material):
        mat._check_alive()
        self.mat = mat
        self.comp = mat.comp
        self._amass = mat.tracker.decay_table.atomic_mass

    def mass_frac(self, nuc) -> float:
        return self.comp[nucid(nuc)]

    def mass(self, nuc) -> float:
        return self.mat.quantity * self.mass_frac(nuc)

    def moles(self, nuc) -> float:
        nuc = nucid(nuc)
        m = self.mass(nuc)
        return 0.0 if m == 0 else m * 1000.0 / self._amass(nuc)

    def atom_fractions(self) -> dict[int, float]:
        per_mass = {n: f / self._amass(n) for n, f in self.comp.fractions.items()}
        total = sum(per_mass.values())
        return {n: v / total for n, v in per_mass.items()}

    def atom_frac(self, nuc) -> float:
        return self.atom_fractions().get(nucid(nuc), 0.0)

    def mass_fractions(self) -> dict[int, float]:
        return dict(self.comp.fractions)

    def element_mass(self, z: int) -> float:
        return self.mat.quantity * sum(f for n, f in self.comp.fractions.items() if znum(n) == z)
