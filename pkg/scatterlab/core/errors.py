class ScatterlabError(Exception):
    """Raiz de los errores propios del laboratorio."""


class ConfigurationError(ScatterlabError, ValueError):
    """Parametros de entrada invalidos; el mensaje nombra el campo."""


class NumericalFailure(ScatterlabError, RuntimeError):
    """Un calculo valido no pudo completarse numericamente."""


__all__ = ["ScatterlabError", "ConfigurationError", "NumericalFailure"]
