import logging

from app.config import settings
from app.dependencies import emit, load_network, parse_target
from app.models.schemas import RunConfig
from app.services.graph_export import to_dot
from app.services.report_builder import build_report
from app.services.stabilizer_synth import SelectionPolicy, closed_loop, select_stabilizer, stabilize

logger = logging.getLogger(__name__)

NAME = "stabilize"

EXIT_UNSOLVABLE = 2


def add_target_arguments(parser):
    target = parser.add_mutually_exclusive_group(required=True)
    target.add_argument("--point", help="Estado destino como tupla de valores: 1,1,0,1")
    target.add_argument("--index", type=int, help="Estado destino como índice δ_N^i")
    target.add_argument("--set", dest="set_spec", help="Conjunto destino: fichero o '{(1,0),(0,1)}' / '{6,7,12}'")


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="Calcula todos los estabilizadores de tiempo óptimo.")
    parser.add_argument("input", help="Fichero de red (DSL) o JSON compilado")
    add_target_arguments(parser)
    parser.add_argument(
        "--enumerate", type=int, nargs="?", const=settings.ENUMERATION_LIMIT, default=None,
        metavar="N", help="Incluye hasta N leyes de la familia en el informe",
    )
    parser.add_argument(
        "--policy", choices=[p.value for p in SelectionPolicy], default=settings.DEFAULT_POLICY,
        help="Ley representante: menor o mayor control admisible por estado",
    )
    parser.add_argument("--dot", help="Escribe el grafo del lazo cerrado en formato DOT")
    parser.add_argument("--json", dest="json_out", help="Escribe el informe en este fichero en lugar de stdout")
    return parser


def run(args) -> int:
    config = RunConfig.from_args(NAME, args)
    _, compiled = load_network(config.input)
    target = parse_target(compiled, config.point, config.index, config.set)
    result = stabilize(compiled.transition, target)
    report = build_report(compiled, result, SelectionPolicy(config.policy), config.enumerate)
    emit(report.model_dump_json(indent=settings.INDENT_JSON), config.json_out)

    if config.dot and result.solvable:
        goal = target.states if target.is_point else result.core
        loop = closed_loop(compiled.transition, select_stabilizer(result.family, config.policy), goal)
        emit(to_dot(loop.matrix, loop.attractor, compiled.state_label, compiled.name), config.dot)
    elif config.dot:
        logger.warning("Sin estabilizador no hay lazo cerrado; no se escribe %s", config.dot)

    return 0 if result.solvable else EXIT_UNSOLVABLE
