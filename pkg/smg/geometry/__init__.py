# smg/geometry/__init__.py
