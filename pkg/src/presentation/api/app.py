"""FastAPI application serving the mock OCCI runtime."""

from contextlib import asynccontextmanager
from typing import AsyncGenerator, Optional

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from ...infrastructure.config.settings import Settings, get_settings
from ...infrastructure.runtime.mock_runtime import MockRuntime
from ...application.container import init_container, close_container
from ...shared.exceptions import APIException, BaseException as AppException
from .v1.routers import entities

# API metadata
API_TITLE = "tosca2occi mock runtime"
API_VERSION = "1.0.0"
API_DESCRIPTION = """
## Mock OCCI runtime

Keeps a runtime model of deployed resources and links and drives their
lifecycle state machines.

### Endpoints

* `GET /configuration` - snapshot of every live entity
* `PUT /entity/{id}` - create a resource or link
* `PATCH /entity/{id}` - merge attributes, replace mixins, title or endpoints
* `DELETE /entity/{id}` - delete an entity no link references
* `POST /entity/{id}/action/{name}` - trigger a lifecycle action
* `POST /_fault` - inject a fault (test harness)

### Error Response

```json
{
    "error": {
        "code": "4009",
        "message": "Human readable message",
        "details": {"entity_id": "..."}
    }
}
```

### Status Codes

- `200 OK` - Request succeeded
- `201 Created` - Entity created
- `400 Bad Request` - Body fails validation
- `404 Not Found` - Unknown entity
- `409 Conflict` - Invalid transition, dangling reference or existing id
"""

TAGS_METADATA = [
    {
        "name": "runtime",
        "description": "Runtime model, entity CRUD and lifecycle actions",
    },
    {
        "name": "health",
        "description": "Health check endpoints",
    },
]


def create_app(settings: Optional[Settings] = None, runtime: Optional[MockRuntime] = None) -> FastAPI:
    """Create FastAPI application.

    Args:
        settings: Application settings (global settings if None)
        runtime: Runtime to serve (the container builds one if None)
    """
    settings = settings or get_settings()

    @asynccontextmanager
    async def lifespan(app: FastAPI) -> AsyncGenerator:
        """Application lifespan manager."""
        # Startup
        init_container(settings, runtime=runtime)
        yield
        # Shutdown
        close_container()

    app = FastAPI(
        title=API_TITLE,
        version=API_VERSION,
        description=API_DESCRIPTION,
        lifespan=lifespan,
        docs_url="/api/docs" if settings.api_docs_enabled else None,
        redoc_url="/api/redoc" if settings.api_docs_enabled else None,
        openapi_url="/api/openapi.json" if settings.api_docs_enabled else None,
        openapi_tags=TAGS_METADATA,
    )

    # CORS middleware
    app.add_middleware(
        CORSMiddleware,
        allow_origins=settings.api_cors_origins,
        allow_credentials=True,
        allow_methods=["*"],
        allow_headers=["*"],
    )

    # Exception handlers
    @app.exception_handler(APIException)
    async def api_exception_handler(request: Request, exc: APIException):
        """Handle API exceptions."""
        return JSONResponse(
            status_code=exc.status_code,
            content={
                "error": exc.to_dict()
            }
        )

    @app.exception_handler(AppException)
    async def app_exception_handler(request: Request, exc: AppException):
        """Handle application exceptions."""
        return JSONResponse(
            status_code=500,
            content={
                "error": exc.to_dict()
            }
        )

    @app.exception_handler(Exception)
    async def general_exception_handler(request: Request, exc: Exception):
        """Handle general exceptions."""
        return JSONResponse(
            status_code=500,
            content={
                "error": {
                    "code": "5000",
                    "message": "An unexpected error occurred",
                    "details": {"type": type(exc).__name__}
                }
            }
        )

    # Health check endpoints
    @app.get(
        "/health",
        tags=["health"],
        summary="Health check",
        description="Basic health check endpoint"
    )
    async def health():
        """Health check endpoint."""
        return {"status": "healthy", "version": API_VERSION}

    @app.get(
        "/ready",
        tags=["health"],
        summary="Readiness check",
        description="Check if the runtime is ready to handle requests"
    )
    async def ready():
        """Readiness check endpoint."""
        return {"status": "ready", "version": API_VERSION}

    # Runtime routes keep the unversioned paths clients expect
    app.include_router(entities.router)

    return app


# Create application instance
app = create_app()
