# equires/__init__.py
