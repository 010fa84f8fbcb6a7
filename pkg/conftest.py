import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'FactorSelection.settings')
django.setup()
