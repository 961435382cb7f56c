"""
LEDLEY — línea de órdenes
    python -m app compile   <red>
    python -m app stabilize <red> (--point v1,...,vn | --index i | --set S) [--enumerate [N]] [--policy P] [--dot F] [--json F]
    python -m app verify    <red> --law F (--point ... | --index ... | --set ...)
    python -m app graph     <red> (--law F <destino> | --report F) [--out F]

Códigos de salida: 0 éxito, 1 error de entrada o interno, 2 sin solución / verificación fallida.
"""
import argparse
import logging
import sys
from typing import Optional, Sequence

from app.commands import COMMANDS
from app.config import settings

logger = logging.getLogger(__name__)

EXIT_ERROR = 1


class LedleyArgumentParser(argparse.ArgumentParser):
    """Los errores de uso salen con código 1, no con el 2 de argparse (reservado a 'sin solución')."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = LedleyArgumentParser(
        prog="ledley",
        description="Estabilizadores de realimentación de estado de tiempo óptimo para redes lógicas de control",
    )
    parser.add_argument("--log-level", default=settings.LOG_LEVEL, help="Nivel de logging (por defecto %(default)s)")
    subparsers = parser.add_subparsers(dest="subcommand", required=True)
    for command in COMMANDS:
        command.add_parser(subparsers).set_defaults(handler=command.run)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else EXIT_ERROR

    logging.basicConfig(
        level=args.log_level.upper(),
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )

    try:
        return args.handler(args)
    except (ValueError, OverflowError, OSError) as e:
        logger.error("%s", e)
        return EXIT_ERROR
    except Exception:
        logger.exception("Error inesperado en '%s'", args.subcommand)
        return EXIT_ERROR
