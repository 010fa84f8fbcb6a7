from django.apps import AppConfig


class BayesfactorConfig(AppConfig):
    name = 'bayesfactor'
    verbose_name = 'Bayes factors'
