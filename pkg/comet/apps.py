from django.apps import AppConfig


class CometConfig(AppConfig):
    default_auto_field = "django.db.models.BigAutoField"
    name = "comet"
    verbose_name = "Comet quiver crystal toolkit"
