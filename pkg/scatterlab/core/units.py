from dataclasses import dataclass
from typing import Optional

from .config import Settings, get_settings
from .errors import ConfigurationError

UNIT_SYSTEMS = ("natural", "mev_fm")


@dataclass(frozen=True)
class UnitSystem:
    """Conversion de longitudes en la frontera; los nucleos trabajan con hbar=c=1.

    En `mev_fm` energias, masas y momentos van en MeV y las longitudes en fm;
    internamente una longitud en fm se divide por hbar*c y queda en 1/MeV.
    """

    name: str
    hbar_c: float

    @property
    def is_natural(self) -> bool:
        return self.name == "natural"

    def length_to_internal(self, value):
        if self.is_natural:
            return value
        return value / self.hbar_c

    def length_from_internal(self, value):
        if self.is_natural:
            return value
        return value * self.hbar_c

    @property
    def length_label(self) -> str:
        return "1/m" if self.is_natural else "fm"

    @property
    def energy_label(self) -> str:
        return "m" if self.is_natural else "MeV"


def get_unit_system(name: str, settings: Optional[Settings] = None) -> UnitSystem:
    """Construye el sistema de unidades pedido por nombre."""
    settings = settings or get_settings()
    normalized = (name or "").strip().lower()
    if normalized not in UNIT_SYSTEMS:
        raise ConfigurationError(
            f"units: valor '{name}' no soportado; use uno de {', '.join(UNIT_SYSTEMS)}."
        )
    if settings.hbar_c <= 0:
        raise ConfigurationError("hbar_c: debe ser positivo.")
    return UnitSystem(name=normalized, hbar_c=settings.hbar_c)


__all__ = ["UNIT_SYSTEMS", "UnitSystem", "get_unit_system"]
