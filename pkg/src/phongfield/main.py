#!/usr/bin/env python
# -*- coding: utf-8 -*-

"""
phongfield 命令行入口
每个子命令运行一个实验，写出 JSON 报告与 CSV / PLY 产物。

退出码: 0 成功, 2 前置条件失败, 3 求解器不收敛。
"""

import argparse
import json
import sys
from typing import Sequence

from phongfield.core.config import settings
from phongfield.core.constants import EnergyKind, ExitCode, Tessellation
from phongfield.core.exception_translate import translate_exception
from phongfield.core.exceptions import PhongFieldError
from phongfield.core.logging_config import get_logger, set_log_level
from phongfield.services import SERVICES
from phongfield.utils.parsing import NORMAL_CHOICES

logger = get_logger(__name__)

INTERNAL_ERROR = 1


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--output-dir", help="artifact directory (default: OUTPUT_DIR/<command>)")
    p.add_argument("--dump-matrices", action="store_true", help="write assembled matrices as Matrix Market")


def _mesh(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--mesh",
        required=True,
        help="torus:N[:seed], sphere:N[:seed], aniso-sphere:N[:seed], icosphere:P or an OBJ path",
    )
    p.add_argument("--normals", choices=NORMAL_CHOICES, help="normal source (default: auto)")
    p.add_argument("--unit-area", action="store_true", help="rescale the mesh to unit area")


def _energy(p: argparse.ArgumentParser) -> None:
    p.add_argument("--energy", choices=EnergyKind.all_values(), help="energy (default: connection)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="phongfield",
        description="Tangent vector field experiments on triangle meshes with Phong normals.",
    )
    parser.add_argument("--log-level", choices=["DEBUG", "INFO", "WARNING", "ERROR"], default=None)
    parser.add_argument("--version", action="version", version=f"%(prog)s {settings.PROJECT_VERSION}")
    sub = parser.add_subparsers(dest="command", required=True)

    # unset options fall back to the parameter model defaults
    def add(name: str, help_text: str) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help_text, argument_default=argparse.SUPPRESS)
        _common(p)
        return p

    p = add("spectrum-sphere", "connection spectrum of random or icosahedral spheres")
    p.add_argument("--n", type=int)
    p.add_argument("--seeds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--count", type=int)
    p.add_argument("--aniso", action="store_true")
    p.add_argument("--lump", action="store_true", help="lumped vector mass")
    p.add_argument("--icosphere", type=int, metavar="PASSES")
    p.add_argument("--normals", choices=NORMAL_CHOICES)

    p = add("hodge-compare", "Hodge eigenvalues paired with cotangent eigenvalues")
    _mesh(p)
    p.add_argument("--count", type=int)
    p.add_argument("--subdivide", type=int, metavar="PASSES")

    p = add("rotation-invariance", "J-conjugation identities of mass and stiffness")
    _mesh(p)

    p = add("bracket-sphere", "Lie bracket error on the unit sphere")
    p.add_argument("--tess", choices=[t.value for t in Tessellation])
    p.add_argument("--passes", type=int, help="icosphere subdivision passes")
    p.add_argument("--n", type=int, help="random hull vertex count")
    p.add_argument("--b", type=int, help="bandwidth")
    p.add_argument("--seed", type=int)
    p.add_argument("--coordinate", action="store_true", help="bracket of pi(e1) and pi(e2)")
    p.add_argument("--mode", choices=["project", "direct"])

    p = add("bracket-torus", "Lie bracket error on random tori")
    p.add_argument("--n", type=int)
    p.add_argument("--b", type=int)
    p.add_argument("--seeds", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--mode", choices=["project", "direct"])

    p = add("interpolate", "smoothest field through sparse vertex constraints")
    _mesh(p)
    p.add_argument("--constraints", required=True, help="v:a,b;v:a,b,c")
    _energy(p)

    p = add("vector-heat", "vector heat transport of source vectors")
    _mesh(p)
    p.add_argument("--sources", required=True, help="v:a,b;v:a,b,c")
    p.add_argument("--t", type=float, help="diffusion time (default: mean edge length squared)")
    p.add_argument("--labels", action="store_true", help="also write nearest-source labels")
    p.add_argument("--consistent-mass", action="store_true", help="consistent scalar mass in the two scalar diffusions")

    p = add("eigenfields", "smallest eigenfields of an energy")
    _mesh(p)
    _energy(p)
    p.add_argument("--k", type=int)
    p.add_argument("--lump", action="store_true")
    p.add_argument("--grade", action="store_true", help="grade each near-degenerate cluster by divergence")

    return parser


def _report_error(error: PhongFieldError) -> int:
    print(json.dumps(error.to_dict(), default=str), file=sys.stderr)
    return error.exit_code


def run(argv: Sequence[str] | None = None) -> int:
    """解析参数，运行一个实验并返回退出码"""
    args = vars(build_parser().parse_args(argv))
    command = args.pop("command")
    log_level = args.pop("log_level")
    if log_level:
        set_log_level(log_level)

    try:
        report = SERVICES[command].run(args)
    except PhongFieldError as e:
        return _report_error(e)
    except Exception as e:
        translated = translate_exception(e)
        if translated is None:
            logger.error(f"未处理异常: {command}: {e}", exc_info=True)
            return INTERNAL_ERROR
        getattr(logger, translated.log_level)(f"{command}: {e}")
        return _report_error(translated.error)

    print(report.model_dump_json(indent=2))
    return ExitCode.OK


def main() -> int:
    return int(run())


if __name__ == "__main__":
    sys.exit(main())
