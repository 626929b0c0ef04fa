import logging

from django.apps import AppConfig


logger = logging.getLogger(__name__)


class CubeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'cube'

    def ready(self) -> None:
        from .lift import verify_eigenvector_table

        worst = verify_eigenvector_table()
        logger.debug('Eigenvector table verified (max deviation %.3e)', worst)
