"""Subcomandos de la línea de órdenes (uno por módulo)."""
from app.commands import compile, graph, stabilize, verify

COMMANDS = (compile, stabilize, verify, graph)
