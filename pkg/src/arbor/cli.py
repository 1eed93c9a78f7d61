# src/arbor/cli.py

"""
Command-line surface.

Every verb reads series documents (JSON or YAML, ``-`` for stdin), writes one
canonical JSON value to stdout and exits 0. Failures print a single
``{"error":{"code":...,"message":...}}`` line on stderr and exit 2, or 3 when a
configured resource cap was hit.
"""

from __future__ import annotations

import argparse
import logging
import sys
from fractions import Fraction
from pathlib import Path
from typing import Any, BinaryIO, Optional, Sequence, TextIO

from dotenv import load_dotenv

from arbor import __version__
from arbor.config import get_settings, override_settings
from arbor.errors import ArborError, InvalidArgumentError, ResourceLimitError, UnknownVerbError, UsageError
from arbor.logging_config import configure_logging
from arbor.models.comm_series import CommMap, CommSeries
from arbor.models.free_series import FreeMap
from arbor.models.tree import TreeFamily, TreeFamilySpec
from arbor.services import applications
from arbor.services.comm_arithmetic import jacobian_linear_term
from arbor.services.comm_composition import compose_chain_direct, compose_fdb, compose_partition
from arbor.services.comm_inversion import (
    GENERAL_PATHS,
    InversionPath,
    invert_general,
    invert_identity_linear,
    phi_involution,
)
from arbor.services.fern_checker import FernPath, fern_nilpotency_check
from arbor.services.free_arithmetic import free_jacobian_at_zero, hausdorff_derivative
from arbor.services.free_composition import free_compose_chain_direct, free_compose_fdb
from arbor.services.free_inversion import free_invert, free_invert_general
from arbor.services.series_codec import (
    canonical_dumps,
    encode,
    load_comm_map,
    load_comm_series,
    load_free_map,
    load_free_series,
)
from arbor.services.tree_enumeration import enumerate_trees
from arbor.tracing import configure_tracing
from arbor.utils.limits import enforce_limit
from arbor.utils.rational import format_rational

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_RESOURCE_LIMIT = 3

STDIN_PATH = "-"


class _Parser(argparse.ArgumentParser):
    """Raises instead of printing usage and calling ``sys.exit``."""

    def __init__(self, *args, **kwargs):
        # no prefix matching: "--m" must not resolve to "--max-leaves" or "--max-degree"
        kwargs.setdefault("allow_abbrev", False)
        super().__init__(*args, **kwargs)

    def error(self, message: str):
        if message.startswith(("argument verb: invalid choice", "argument app: invalid choice")):
            raise UnknownVerbError(f"{self.prog}: {message}")
        raise UsageError(f"{self.prog}: {message}")


class _Inputs:
    """Reads named documents, allowing stdin to be consumed once."""

    def __init__(self, stdin: BinaryIO | TextIO):
        self.stdin = stdin
        self._stdin_used = False

    def read(self, path: str) -> tuple[bytes, Optional[str]]:
        if path == STDIN_PATH:
            if self._stdin_used:
                raise UsageError("stdin ('-') can be named only once")
            self._stdin_used = True
            stream = getattr(self.stdin, "buffer", self.stdin)
            data = stream.read()
            return (data.encode("utf-8") if isinstance(data, str) else data), None
        try:
            return Path(path).read_bytes(), path
        except OSError as exc:
            raise InvalidArgumentError(f"cannot read {path}: {exc.strerror or exc}") from exc

    def comm_map(self, path: str) -> CommMap:
        mapping = load_comm_map(*self.read(path))
        _check_degree(mapping.truncation)
        return mapping

    def comm_series(self, path: str) -> CommSeries:
        series = load_comm_series(*self.read(path))
        _check_degree(series.truncation)
        return series

    def free_map(self, path: str) -> FreeMap:
        mapping = load_free_map(*self.read(path))
        _check_degree(mapping.truncation)
        return mapping


def _check_degree(truncation: int) -> None:
    enforce_limit("degree", truncation, get_settings().max_degree)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(part) for part in text.split(",") if part.strip())
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from exc


def _json_number(value: Fraction) -> int | str:
    return value.numerator if value.denominator == 1 else format_rational(value)


# -- verbs ------------------------------------------------------------------

def _cmd_compose(args, inputs: _Inputs) -> Any:
    chain = [inputs.comm_map(path) for path in args.maps]
    if args.method == "direct":
        return encode(compose_chain_direct(chain))
    if args.method == "partition":
        if len(chain) != 2:
            raise UsageError("--partition composes exactly two maps")
        return encode(compose_partition(chain[0], chain[1]))
    return encode(compose_fdb(chain))


def _cmd_invert(args, inputs: _Inputs) -> Any:
    mapping = inputs.comm_map(args.map)
    path = args.path
    if path is None:
        identity = mapping.truncation < 1 or jacobian_linear_term(mapping).is_identity()
        path = InversionPath.RECURSIVE if identity else InversionPath.REDUCTION
    path = InversionPath(path)
    if path in GENERAL_PATHS:
        return encode(invert_general(mapping, path))
    return encode(invert_identity_linear(mapping, path))


def _cmd_phi(args, inputs: _Inputs) -> Any:
    return encode(phi_involution(inputs.comm_map(args.map), InversionPath(args.path)))


def _cmd_fern_check(args, inputs: _Inputs) -> Any:
    result = fern_nilpotency_check(
        inputs.comm_map(args.map), args.m, path=FernPath(args.path), degree_bound=args.bound
    )
    return result.to_dict()


def _tree_spec(args) -> TreeFamilySpec:
    planar = args.planar or args.word is not None
    if planar:
        if args.word is None:
            raise UsageError("planar families need --word")
        if args.alpha is not None or args.leaves is not None:
            raise UsageError("--word cannot be combined with --alpha or --leaves")
        leaves = args.word
    elif args.alpha is not None:
        if args.leaves is not None:
            raise UsageError("give either --alpha or --leaves, not both")
        leaves = args.alpha
    elif args.leaves is not None:
        if args.dim != 1:
            raise UsageError("--leaves is shorthand for --alpha when --dim is 1")
        leaves = (args.leaves,)
    else:
        raise UsageError("one of --alpha, --leaves or --word is required")
    return TreeFamilySpec(
        family=TreeFamily(args.family),
        root_type=args.root,
        leaves=leaves,
        dimension=args.dim,
        generations=args.gens,
        terminal_type=args.terminal,
        planar=planar,
    )


def _cmd_trees(args, inputs: _Inputs) -> Any:
    trees = enumerate_trees(_tree_spec(args))
    if args.action == "count":
        return len(trees)
    return [tree.to_dict() for tree in trees]


def _cmd_free_compose(args, inputs: _Inputs) -> Any:
    chain = [inputs.free_map(path) for path in args.maps]
    if args.method == "direct":
        return encode(free_compose_chain_direct(chain))
    return encode(free_compose_fdb(chain))


def _cmd_free_invert(args, inputs: _Inputs) -> Any:
    mapping = inputs.free_map(args.map)
    path = args.path
    if path is None:
        identity = mapping.truncation < 1 or free_jacobian_at_zero(mapping).is_identity()
        path = InversionPath.RECURSIVE if identity else InversionPath.REDUCTION
    path = InversionPath(path)
    if path in GENERAL_PATHS:
        return encode(free_invert_general(mapping, path))
    return encode(free_invert(mapping, path))


def _cmd_hausdorff(args, inputs: _Inputs) -> Any:
    series = load_free_series(*inputs.read(args.series))
    _check_degree(series.truncation)
    return encode(hausdorff_derivative(series, args.var))


def _cmd_app(args, inputs: _Inputs) -> Any:
    if args.app == "bell":
        return applications.bell(args.k)
    if args.app == "stirling":
        if args.j is None:
            return applications.stirling_row(args.k)
        return applications.bell_stirling(args.k, args.j)
    if args.app == "hermite":
        return [_json_number(value) for value in applications.hermite_polynomial(args.k).to_list()]
    if args.app == "count-trees":
        count = applications.count_proper_trees(args.k, applications.ProperTreeFilter(args.filter))
        return {
            "k": count.k,
            "filter": count.filter.value,
            "by_inversion": count.by_inversion,
            "by_enumeration": count.by_enumeration,
        }

    series = inputs.comm_series(args.series)
    if args.app == "reciprocal":
        return encode(applications.series_reciprocal(series))
    table = dict(series.terms())
    if args.app == "moments":
        values = applications.cumulants_to_moments(table, series.truncation, series.dimension)
    else:
        values = applications.moments_to_cumulants(table, series.truncation, series.dimension)
    return encode(CommSeries(series.dimension, series.truncation, values))


# -- parser -----------------------------------------------------------------

def build_parser() -> _Parser:
    parser = _Parser(prog="arbor", description="Exact truncated power series over trees")
    parser.add_argument("--version", action="version", version=f"arbor {__version__}")
    parser.add_argument("--max-leaves", type=int, default=None, help="Cap on tree leaves / word length")
    parser.add_argument("--max-degree", type=int, default=None, help="Cap on accepted truncation degree")
    verbs = parser.add_subparsers(dest="verb", required=True, parser_class=_Parser)

    compose = verbs.add_parser("compose", help="Compose commutative maps f1∘f2∘...")
    method = compose.add_mutually_exclusive_group()
    method.add_argument("--fdb", dest="method", action="store_const", const="fdb")
    method.add_argument("--direct", dest="method", action="store_const", const="direct")
    method.add_argument("--partition", dest="method", action="store_const", const="partition")
    compose.add_argument("maps", nargs="+", metavar="MAP")
    compose.set_defaults(handler=_cmd_compose, method="fdb")

    invert = verbs.add_parser("invert", help="Compositional inverse of a commutative map")
    invert.add_argument("--path", choices=[path.value for path in InversionPath], default=None)
    invert.add_argument("map", metavar="MAP")
    invert.set_defaults(handler=_cmd_invert)

    phi = verbs.add_parser("phi", help="Apply the involution Φ to a nonlinear table H")
    phi.add_argument("--path", choices=[InversionPath.TREE_SUM.value, InversionPath.RECURSIVE.value],
                     default=InversionPath.RECURSIVE.value)
    phi.add_argument("map", metavar="H")
    phi.set_defaults(handler=_cmd_phi)

    fern = verbs.add_parser("fern-check", help="Decide whether J(H)^m vanishes")
    fern.add_argument("--m", type=int, required=True)
    fern.add_argument("--bound", type=int, default=None, help="Degree bound; defaults to m(δ−1)")
    fern.add_argument("--path", choices=[path.value for path in FernPath], default=FernPath.MATRIX_POWER.value)
    fern.add_argument("map", metavar="H")
    fern.set_defaults(handler=_cmd_fern_check)

    trees = verbs.add_parser("trees", help="Count or list a tree family")
    trees.add_argument("action", choices=["count", "list"])
    trees.add_argument("--family", choices=[family.value for family in TreeFamily], required=True)
    trees.add_argument("--dim", type=int, required=True)
    trees.add_argument("--alpha", type=_int_list, default=None)
    trees.add_argument("--word", type=_int_list, default=None)
    trees.add_argument("--leaves", type=int, default=None)
    trees.add_argument("--gens", type=int, default=None)
    trees.add_argument("--terminal", type=int, default=None)
    trees.add_argument("--root", type=int, default=1)
    trees.add_argument("--planar", action="store_true")
    trees.set_defaults(handler=_cmd_trees)

    free_compose = verbs.add_parser("free-compose", help="Compose free maps f1∘f2∘...")
    free_method = free_compose.add_mutually_exclusive_group()
    free_method.add_argument("--fdb", dest="method", action="store_const", const="fdb")
    free_method.add_argument("--direct", dest="method", action="store_const", const="direct")
    free_compose.add_argument("maps", nargs="+", metavar="MAP")
    free_compose.set_defaults(handler=_cmd_free_compose, method="fdb")

    free_inv = verbs.add_parser("free-invert", help="Compositional inverse of a free map")
    free_inv.add_argument("--path", choices=[path.value for path in InversionPath], default=None)
    free_inv.add_argument("map", metavar="MAP")
    free_inv.set_defaults(handler=_cmd_free_invert)

    hausdorff = verbs.add_parser("hausdorff", help="Hausdorff derivative of a free series")
    hausdorff.add_argument("--var", type=int, required=True)
    hausdorff.add_argument("series", metavar="SERIES")
    hausdorff.set_defaults(handler=_cmd_hausdorff)

    app = verbs.add_parser("app", help="Classical identities")
    apps = app.add_subparsers(dest="app", required=True, parser_class=_Parser)
    for name in ("bell", "hermite"):
        sub = apps.add_parser(name)
        sub.add_argument("--k", type=int, required=True)
    stirling = apps.add_parser("stirling")
    stirling.add_argument("--k", type=int, required=True)
    stirling.add_argument("--j", type=int, default=None)
    count_trees = apps.add_parser("count-trees")
    count_trees.add_argument("--k", type=int, required=True)
    count_trees.add_argument("--filter", choices=[f.value for f in applications.ProperTreeFilter], default="all")
    for name in ("cumulants", "moments", "reciprocal"):
        sub = apps.add_parser(name)
        sub.add_argument("series", metavar="SERIES")
    app.set_defaults(handler=_cmd_app)

    return parser


def _fail(error: ArborError, stderr: TextIO) -> int:
    stderr.write(canonical_dumps(error.to_dict()) + "\n")
    return EXIT_RESOURCE_LIMIT if isinstance(error, ResourceLimitError) else EXIT_INVALID


def run(
    argv: Sequence[str],
    stdin: Optional[BinaryIO | TextIO] = None,
    stdout: Optional[TextIO] = None,
    stderr: Optional[TextIO] = None,
) -> int:
    stdin = stdin if stdin is not None else sys.stdin
    stdout = stdout if stdout is not None else sys.stdout
    stderr = stderr if stderr is not None else sys.stderr

    try:
        args = build_parser().parse_args(list(argv))
        override_settings(max_leaves=args.max_leaves, max_degree=args.max_degree)
        logger.info("arbor %s", args.verb)
        result = args.handler(args, _Inputs(stdin))
    except ArborError as exc:
        logger.info("arbor failed with %s: %s", exc.code.value, exc.message)
        return _fail(exc, stderr)
    except SystemExit as exc:
        # --help / --version
        return exc.code if isinstance(exc.code, int) else EXIT_OK

    stdout.write(canonical_dumps(result) + "\n")
    return EXIT_OK


def main() -> None:
    load_dotenv()
    try:
        configure_logging()
        configure_tracing("arbor")
    except ArborError as exc:
        sys.exit(_fail(exc, sys.stderr))
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
