import os

import django

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'zetafred.settings')
django.setup()
