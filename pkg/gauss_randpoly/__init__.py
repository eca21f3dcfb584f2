"""Top-level package for gauss_randpoly."""

__author__ = """Christopher Marais"""
__email__ = 'padillacoreanolab@gmail.com'
__version__ = '0.1.0'

import importlib
import pkgutil

__all__ = []

for finder, name, ispkg in pkgutil.iter_modules(__path__):
    if name == "cli":
        continue
    __all__.append(name)
    globals()[name] = importlib.import_module(f'.{name}', __name__)
