'''Shared pytest setup: the repository root goes on sys.path so mods and apps import.'''

import os
import sys

ROOT = os.path.dirname(os.path.dirname(os.path.abspath(__file__)))
if ROOT not in sys.path:
    sys.path.insert(0, ROOT)
