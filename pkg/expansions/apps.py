from django.apps import AppConfig


class ExpansionsConfig(AppConfig):
    name = 'expansions'
