"""Bootstrap Django so pytest can collect the SimpleTestCase suites."""

import os

import django

os.environ.setdefault("DJANGO_SETTINGS_MODULE", "cometproject.settings")
django.setup()
