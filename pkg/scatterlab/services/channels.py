import re
from dataclasses import dataclass
from fractions import Fraction

from scatterlab.core.errors import ConfigurationError

ORBITAL_LETTERS = "spdfghik"

_LABEL_RE = re.compile(r"^\s*(?:\d+)?([a-z])\s*(\d+)\s*/\s*2\s*$", re.IGNORECASE)
_CHI_RE = re.compile(r"^\s*[+-]?\d+\s*$")


class ChannelError(ConfigurationError):
    """Numeros cuanticos de canal invalidos."""


@dataclass(frozen=True)
class Channel:
    """Canal de Dirac: chi = +-(j+1/2) y los ordenes l_chi, l_{-chi}."""

    chi: int
    j: Fraction
    l_chi: int
    l_minus_chi: int
    tau: int
    label: str

    @property
    def kappa(self) -> int:
        """|chi|, potencia dominante de las condiciones en el origen."""
        return abs(self.chi)

    @property
    def orbital_l(self) -> int:
        return int(self.j + Fraction(self.tau, 2))


@dataclass(frozen=True)
class SchrodingerChannel:
    l: int

    def __post_init__(self) -> None:
        if int(self.l) != self.l or self.l < 0:
            raise ChannelError(f"l={self.l}: debe ser un entero >= 0.")

    @property
    def label(self) -> str:
        return _orbital_letter(self.l)


def _orbital_letter(l: int) -> str:
    if l < len(ORBITAL_LETTERS):
        return ORBITAL_LETTERS[l]
    return f"l{l}"


def _l_of(chi: int) -> int:
    return chi if chi > 0 else -chi - 1


def channel_from_chi(chi: int) -> Channel:
    """Construye el canal completo a partir de chi != 0."""
    if int(chi) != chi or chi == 0:
        raise ChannelError(f"chi={chi}: debe ser un entero distinto de cero.")
    chi = int(chi)
    j = Fraction(2 * abs(chi) - 1, 2)
    l_chi = _l_of(chi)
    label = f"{_orbital_letter(l_chi)}{j.numerator}/{j.denominator}"
    return Channel(
        chi=chi,
        j=j,
        l_chi=l_chi,
        l_minus_chi=_l_of(-chi),
        tau=1 if chi > 0 else -1,
        label=label,
    )


def crossing_transform(channel: Channel) -> Channel:
    """Canal conjugado por cruce (chi -> -chi); E y V los invierte quien llama."""
    return channel_from_chi(-channel.chi)


def parse_channel(text) -> Channel:
    """Acepta etiquetas 's1/2', 'p3/2', '2p1/2' o un chi con signo."""
    if isinstance(text, int):
        return channel_from_chi(text)
    raw = str(text or "")
    if _CHI_RE.match(raw):
        return channel_from_chi(int(raw))
    match = _LABEL_RE.match(raw)
    if not match:
        raise ChannelError(f"channel: no se reconoce '{raw}'.")
    letter, twice_j = match.group(1).lower(), int(match.group(2))
    if letter not in ORBITAL_LETTERS or twice_j % 2 == 0:
        raise ChannelError(f"channel: '{raw}' no es una etiqueta l j valida.")
    l = ORBITAL_LETTERS.index(letter)
    kappa = (twice_j + 1) // 2
    if l == kappa:
        return channel_from_chi(kappa)
    if l == kappa - 1:
        return channel_from_chi(-kappa)
    raise ChannelError(f"channel: j={twice_j}/2 no es compatible con l={l}.")


def parse_schrodinger_channel(text) -> SchrodingerChannel:
    """Acepta 'l=1', '1' o la letra orbital; una etiqueta de Dirac usa su l_chi."""
    raw = str(text).strip().lower()
    if raw.startswith("l="):
        raw = raw[2:]
    if raw.isdigit():
        return SchrodingerChannel(l=int(raw))
    if len(raw) == 1 and raw in ORBITAL_LETTERS:
        return SchrodingerChannel(l=ORBITAL_LETTERS.index(raw))
    return SchrodingerChannel(l=parse_channel(raw).l_chi)


__all__ = [
    "Channel",
    "ChannelError",
    "SchrodingerChannel",
    "channel_from_chi",
    "crossing_transform",
    "parse_channel",
    "parse_schrodinger_channel",
]
