from django.apps import AppConfig


class PosteriorConfig(AppConfig):
    name = 'posterior'
