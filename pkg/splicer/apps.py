from django.apps import AppConfig


class SplicerConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'splicer'
    verbose_name = 'Orbit splicing'
