import logging
from pathlib import Path

from app.dependencies import emit, load_law, load_network, parse_target
from app.models.schemas import RunConfig, StabilizationReport
from app.services.graph_export import to_dot
from app.services.report_builder import report_closed_loop
from app.services.stabilizer_synth import closed_loop, stabilize

logger = logging.getLogger(__name__)

NAME = "graph"


def add_parser(subparsers):
    parser = subparsers.add_parser(NAME, help="Grafo DOT del lazo cerrado a partir de una ley o de un informe.")
    parser.add_argument("input", help="Fichero de red (DSL) o JSON compilado")
    source = parser.add_mutually_exclusive_group(required=True)
    source.add_argument("--law", help="Fichero de ley; requiere un destino")
    source.add_argument("--report", help="Informe JSON producido por 'stabilize'; fija el destino")
    parser.add_argument("--point")
    parser.add_argument("--index", type=int)
    parser.add_argument("--set", dest="set_spec")
    parser.add_argument("--out", help="Escribe el DOT en este fichero en lugar de stdout")
    return parser


def run(args) -> int:
    config = RunConfig.from_args(NAME, args)
    _, compiled = load_network(config.input)
    if config.report:
        report = StabilizationReport.model_validate_json(Path(config.report).read_text(encoding="utf-8"))
        mc, attractor = report_closed_loop(report, compiled.N)
    else:
        law = load_law(config.law, compiled)
        target = parse_target(compiled, config.point, config.index, config.set)
        goal = target.states
        if not target.is_point:
            result = stabilize(compiled.transition, target)
            goal = result.core if result.core else target.states
        loop = closed_loop(compiled.transition, law, goal)
        mc, attractor = loop.matrix, loop.attractor
    logger.debug("Lazo cerrado con %d estados en el atractor", len(attractor.members))
    emit(to_dot(mc, attractor, compiled.state_label, compiled.name), config.out)
    return 0
