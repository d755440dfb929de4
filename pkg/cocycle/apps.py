from django.apps import AppConfig


class CocycleConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'cocycle'
    verbose_name = 'Matrix cocycles'
