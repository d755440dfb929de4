from django.apps import AppConfig


class GluingConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'gluing'
    verbose_name = 'Gluing and connecting gaps'
