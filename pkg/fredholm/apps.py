from django.apps import AppConfig


class FredholmConfig(AppConfig):
    name = 'fredholm'
