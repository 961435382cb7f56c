import logging

from app.config import settings
from app.commands.stabilize import EXIT_UNSOLVABLE, add_target_arguments
from app.dependencies import emit, load_law, load_network, parse_target
from app.models.schemas import RunConfig
from app.services.law_verifier import verify_law
from app.services.report_builder import build_verification

logger = logging.getLogger(__name__)

NAME = "verify"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="Comprueba si una ley dada es un estabilizador de tiempo óptimo.")
    parser.add_argument("input", help="Fichero de red (DSL) o JSON compilado")
    parser.add_argument("--law", required=True, help="Fichero con los N índices de control g(1) ... g(N)")
    add_target_arguments(parser)
    parser.add_argument("--json", dest="json_out", help="Escribe el informe en este fichero en lugar de stdout")
    return parser


def run(args) -> int:
    config = RunConfig.from_args(NAME, args)
    _, compiled = load_network(config.input)
    target = parse_target(compiled, config.point, config.index, config.set)
    law = load_law(config.law, compiled)
    outcome = verify_law(compiled.transition, law, target)
    if not outcome.passed:
        logger.info(
            "La ley de %s no supera la verificación (%d estados fuera de capa, %d tiempos no óptimos)",
            config.law, len(outcome.violations), len(outcome.mismatches),
        )
    report = build_verification(compiled, law, outcome)
    emit(report.model_dump_json(indent=settings.INDENT_JSON), config.json_out)
    return 0 if outcome.passed else EXIT_UNSOLVABLE
