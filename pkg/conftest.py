"""pytest wiring: configure Django the way ``manage.py test`` does."""
import os
import sys
from pathlib import Path

PROJECT_DIR = Path(__file__).resolve().parent / 'summarization_project'
if str(PROJECT_DIR) not in sys.path:
    sys.path.insert(0, str(PROJECT_DIR))

os.environ.setdefault('DJANGO_SETTINGS_MODULE', 'summarization_project.settings')

import django  # noqa: E402

django.setup()
