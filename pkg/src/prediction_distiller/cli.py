# src/prediction_distiller/cli.py
"""
CLI Global y Raíz de Composición.

Une data-pipeline, teacher-factory, apm-distiller y eval-harness a través de
los casos de uso de orquestación. Códigos de salida: 0 ok, 2 configuración,
3 datos, 4 divergencia numérica, 1 cualquier otro fallo (train-teachers
siempre devuelve 1 ante error).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any

from prediction_distiller import __version__
from prediction_distiller.core.exceptions import (
    ConfigurationError,
    DataIntegrityError,
    NumericDivergenceError,
)
from prediction_distiller.infrastructure.observability import configure_logging
from prediction_distiller.modules.eval_harness import STUDY_NAMES
from prediction_distiller.modules.orchestration import (
    ExperimentWorkflow,
    compare_distilled,
    export_distilled_grid,
    load_run_config,
    verify_artifacts,
)

logger = logging.getLogger("prediction_distiller.cli")

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_DATA = 3
EXIT_NUMERIC = 4


def exit_code_for(error: BaseException) -> int:
    if isinstance(error, ConfigurationError):
        return EXIT_CONFIG
    if isinstance(error, DataIntegrityError):
        return EXIT_DATA
    if isinstance(error, NumericDivergenceError):
        return EXIT_NUMERIC
    return EXIT_FAILURE


def _parse_value(text: str) -> Any:
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            continue
    return text


def parse_values(text: str | None) -> list[Any] | None:
    """'1,2,5' -> [1, 2, 5]; 'manhattan,cosine' -> ['manhattan', 'cosine']."""
    if not text:
        return None
    return [_parse_value(item.strip()) for item in text.split(",") if item.strip()]


def _workflow(args: argparse.Namespace) -> ExperimentWorkflow:
    config = load_run_config(Path(args.config))
    return ExperimentWorkflow(config, threads=args.threads)


# =====================================================================
# Sub-comandos
# =====================================================================
def cmd_train_teachers(args: argparse.Namespace) -> int:
    manifest = _workflow(args).train_teachers(n=args.n, out_dir=args.out)
    print(manifest)
    return EXIT_OK


def cmd_distill(args: argparse.Namespace) -> int:
    outcome = _workflow(args).distill(
        args.pool, ipc=args.ipc, segment=args.segment, out=args.out, resume=args.resume
    )
    print(outcome.path)
    return EXIT_OK


def cmd_evaluate(args: argparse.Namespace) -> int:
    report, path = _workflow(args).evaluate(args.distilled, arch=args.arch, n_seeds=args.seeds, out=args.out)
    print(json.dumps(report.to_dict(), indent=2, sort_keys=True, ensure_ascii=False))
    logger.info(f"Reporte escrito en {path}")
    return EXIT_OK


def cmd_study(args: argparse.Namespace) -> int:
    written = _workflow(args).study(
        args.name, args.pool, ipc=args.ipc, values=parse_values(args.values), out_dir=args.out
    )
    for path in written.values():
        print(path)
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    config = load_run_config(Path(args.config))
    for result in verify_artifacts(config.config_hash, args.artifacts):
        print(f"OK  {result.path}")
    return EXIT_OK


def cmd_compare(args: argparse.Namespace) -> int:
    comparison = compare_distilled(args.a, args.b, args.atol)
    print(json.dumps(comparison.to_dict(), indent=2, sort_keys=True))
    return EXIT_OK if comparison.within_tolerance else EXIT_FAILURE


def cmd_export_grid(args: argparse.Namespace) -> int:
    if args.config:
        path = _workflow(args).export_grid(args.distilled, args.out)
    else:
        path = export_distilled_grid(args.distilled, args.out)
    print(path)
    return EXIT_OK


# =====================================================================
# Parser
# =====================================================================
def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="prediction-distiller",
        description="Destilación de datasets por emparejamiento adversarial de predicciones",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--threads", type=int, default=None, help="Hilos para segmentos y semillas (default: [run].threads)")
    parser.add_argument(
        "--log-level", default="INFO", choices=["DEBUG", "INFO", "WARNING", "ERROR"], help="Nivel de log en consola"
    )
    parser.add_argument("--log-file", type=Path, default=None, help="Archivo de log forense (DEBUG)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train-teachers", help="Entrena el pool de teachers")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--n", type=int, default=None, help="Número de teachers (default: [teacher].n)")
    p.add_argument("--out", type=Path, default=None, help="Directorio del pool")
    p.set_defaults(handler=cmd_train_teachers)

    p = sub.add_parser("distill", help="Destila un conjunto sintético")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--pool", required=True, type=Path, help="Directorio del pool (manifest.json)")
    p.add_argument("--ipc", required=True, type=int, help="Imágenes por clase")
    p.add_argument("--segment", type=int, default=None, help="Muestras por bloque de gradiente")
    p.add_argument("--out", type=Path, default=None, help="Archivo .apms de salida")
    p.add_argument("--resume", type=Path, default=None, help="Snapshot .apms desde el que reanudar")
    p.set_defaults(handler=cmd_distill)

    p = sub.add_parser("evaluate", help="Re-entrena redes sobre un conjunto destilado")
    p.add_argument("--distilled", required=True, type=Path)
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--arch", default=None, help="Sobrescribe [arch], p. ej. 'width=256,depth=2'")
    p.add_argument("--seeds", type=int, default=None, help="Número de semillas")
    p.add_argument("--out", type=Path, default=None, help="Ruta del reporte JSON")
    p.set_defaults(handler=cmd_evaluate)

    p = sub.add_parser("study", help="Ejecuta un estudio (ablación, merge, sonda, NAS)")
    p.add_argument("name", choices=STUDY_NAMES)
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("--pool", required=True, type=Path)
    p.add_argument("--ipc", type=int, default=None)
    p.add_argument("--values", default=None, help="Barrido separado por comas, p. ej. '1,2,5,10'")
    p.add_argument("--out", type=Path, default=None, help="Directorio de resultados")
    p.set_defaults(handler=cmd_study)

    p = sub.add_parser("verify", help="Comprueba el config_hash embebido en artefactos")
    p.add_argument("--config", required=True, type=Path)
    p.add_argument("artifacts", nargs="+", type=Path)
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("compare", help="Compara dos archivos .apms con tolerancia absoluta")
    p.add_argument("a", type=Path)
    p.add_argument("b", type=Path)
    p.add_argument("--atol", type=float, default=1e-5)
    p.set_defaults(handler=cmd_compare)

    p = sub.add_parser("export-grid", help="Exporta las imágenes sintéticas como PNG")
    p.add_argument("distilled", type=Path)
    p.add_argument("out", type=Path)
    p.add_argument("--config", type=Path, default=None, help="Invierte el preprocesado de esta corrida")
    p.set_defaults(handler=cmd_export_grid)

    return parser


# =====================================================================
# 🚀 PUNTO DE ENTRADA PRINCIPAL
# =====================================================================
def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    configure_logging(getattr(logging, args.log_level), args.log_file)
    handler: Callable[[argparse.Namespace], int] = args.handler

    try:
        return handler(args)
    except Exception as e:
        code = EXIT_FAILURE if args.command == "train-teachers" else exit_code_for(e)
        logger.error(f"❌ {args.command} falló ({type(e).__name__}): {e}")
        logger.debug("Traza completa", exc_info=True)
        return code


if __name__ == "__main__":
    sys.exit(main())
