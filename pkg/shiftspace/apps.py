from django.apps import AppConfig


class ShiftspaceConfig(AppConfig):
    default_auto_field = 'django.db.models.BigAutoField'
    name = 'shiftspace'
    verbose_name = 'Subshifts and languages'
