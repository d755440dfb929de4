from django.apps import AppConfig


class BoweneyeConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'boweneye'
    verbose_name = 'Bowen eye sojourns'
