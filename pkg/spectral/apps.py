from django.apps import AppConfig


class SpectralConfig(AppConfig):
    name = 'spectral'
