# smg/symmetry/__init__.py
