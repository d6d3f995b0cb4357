# smg/graph/__init__.py
