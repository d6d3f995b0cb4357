# smg/io/__init__.py
