from django.apps import AppConfig


class ModelspaceConfig(AppConfig):
    name = 'modelspace'
