from django.apps import AppConfig


class AsymptoticsConfig(AppConfig):
    name = 'asymptotics'
