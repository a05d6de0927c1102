"""Command-line experiment runner (entry point: ``wcslab.cli.__main__.main``)."""
