from fastapi import FastAPI

from scatterlab.core.bootstrap import bootstrap
from scatterlab.core.config import get_settings
from scatterlab.routes import api

settings = bootstrap(get_settings())

app = FastAPI(title=settings.app_title)

app.include_router(api.router)

__all__ = ["app"]
