import logging

from app.config import settings
from app.dependencies import emit, load_network
from app.models.schemas import RunConfig
from app.services.report_builder import export_network

logger = logging.getLogger(__name__)

NAME = "compile"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="Compila una red a su matriz de transición M_F (JSON).")
    parser.add_argument("input", help="Fichero de red (DSL) o JSON compilado")
    parser.add_argument("--out", help="Escribe el JSON en este fichero en lugar de stdout")
    return parser


def run(args) -> int:
    config = RunConfig.from_args(NAME, args)
    _, compiled = load_network(config.input)
    logger.info("Red '%s' compilada: N=%d, M=%d", compiled.name, compiled.N, compiled.M)
    emit(export_network(compiled).model_dump_json(indent=settings.INDENT_JSON), config.out)
    return 0
