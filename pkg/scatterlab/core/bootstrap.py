import logging
from typing import Optional

from .config import PHASE_FIT_MODELS, Settings, get_settings
from .errors import ConfigurationError

logger = logging.getLogger("scatterlab.bootstrap")

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"


def validate_settings(settings: Optional[Settings] = None) -> Settings:
    """Revisa que la configuracion numerica sea utilizable."""
    settings = settings or get_settings()
    positive = {
        "hbar_c": settings.hbar_c,
        "inner_step": settings.inner_step,
        "outer_step": settings.outer_step,
        "inner_region": settings.inner_region,
        "start_radius": settings.start_radius,
        "critical_scan_step": settings.critical_scan_step,
        "critical_tolerance": settings.critical_tolerance,
        "critical_step": settings.critical_step,
        "critical_radius": settings.critical_radius,
        "critical_max_coupling": settings.critical_max_coupling,
        "limit_momentum": settings.limit_momentum,
    }
    for name, value in positive.items():
        if not value > 0:
            raise ConfigurationError(f"{name}: debe ser positivo (recibido {value}).")
    if settings.start_radius >= settings.inner_step:
        raise ConfigurationError("start_radius: debe ser menor que inner_step.")
    if settings.node_index < 1:
        raise ConfigurationError("node_index: debe ser al menos 1.")
    if settings.phase_fit_model not in PHASE_FIT_MODELS:
        raise ConfigurationError(
            f"phase_fit_model: '{settings.phase_fit_model}' no es uno de "
            f"{', '.join(PHASE_FIT_MODELS)}."
        )
    if settings.scan_workers < 1 or settings.scan_block < 1:
        raise ConfigurationError("scan_workers y scan_block deben ser al menos 1.")
    if not 1 <= settings.csv_digits <= 17:
        raise ConfigurationError("csv_digits: debe estar entre 1 y 17.")
    return settings


def configure_logging(settings: Optional[Settings] = None) -> None:
    """Configura el logging raiz con el nivel declarado en la configuracion."""
    settings = settings or get_settings()
    level = getattr(logging, settings.log_level, None)
    if not isinstance(level, int):
        logger.warning("LOG_LEVEL desconocido '%s'; se usa INFO.", settings.log_level)
        level = logging.INFO
    logging.basicConfig(level=level, format=LOG_FORMAT)
    logging.getLogger("scatterlab").setLevel(level)


def bootstrap(settings: Optional[Settings] = None) -> Settings:
    """Prepara logging y valida la configuracion antes de calcular."""
    settings = validate_settings(settings)
    configure_logging(settings)
    logger.debug("Configuracion validada: %s", settings)
    return settings


__all__ = ["bootstrap", "configure_logging", "validate_settings"]
