"""
Command-line front end for the real curve pair toolkit

Results go to stdout as JSON (or plain text with --format text); errors go to
stderr as JSON. Exit codes: 0 success, 1 domain error, 2 unreadable input.
"""
import argparse
import json
import sys

import cellsurf
import codec
import config
import enumeration
import mmp
import pairalg
import piclattice
from golden import GoldenMismatch, GoldenTable
from utils import RealPairsError, logger

EXIT_OK = 0
EXIT_DOMAIN_ERROR = 1
EXIT_PARSE_ERROR = 2


def render_text(data, indent=0):
    """Plain text view of encoded data, one value per line"""
    pad = "  " * indent
    if isinstance(data, dict):
        lines = []
        for key, value in data.items():
            if isinstance(value, (dict, list)) and value:
                lines.append(f"{pad}{key}:")
                lines.append(render_text(value, indent + 1))
            else:
                lines.append(f"{pad}{key}: {json.dumps(value, ensure_ascii=False)}")
        return "\n".join(lines)
    if isinstance(data, list):
        lines = []
        for item in data:
            if isinstance(item, (dict, list)):
                lines.append(f"{pad}-")
                lines.append(render_text(item, indent + 1))
            else:
                lines.append(f"{pad}- {json.dumps(item, ensure_ascii=False)}")
        return "\n".join(lines)
    return f"{pad}{data}"


def _read_text(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, 'r', encoding='utf-8') as f:
        return f.read()


def _steps(text):
    return [mmp.parse_step(token) for token in (text or "").split(",") if token.strip()]


def _lattice(args):
    return piclattice.PicLattice(piclattice.parse_base(args.base), piclattice.parse_blowups(args.blowups))


def _pair(word):
    return pairalg.normalize(word)


class RealPairsCli:
    """Argument parsing and dispatch to the module operations"""

    def __init__(self, out=None, err=None):
        self.out = out or sys.stdout
        self.err = err or sys.stderr
        self.parser = self._build_parser()
        logger.debug("CLI initialized")

    def _build_parser(self):
        fmt = argparse.ArgumentParser(add_help=False)
        fmt.add_argument("--format", choices=["json", "text"], default="json", help="output encoding")

        parser = argparse.ArgumentParser(prog="realpairs", description="Topological types of real curves on real rational surfaces")
        commands = parser.add_subparsers(dest="command", required=True)

        pair = commands.add_parser("pair", help="pair words and the algebra of pairs")
        pair_ops = pair.add_subparsers(dest="op", required=True)
        p = pair_ops.add_parser("normalize", parents=[fmt])
        p.add_argument("word")
        p.set_defaults(handler=self.pair_normalize)
        p = pair_ops.add_parser("case", parents=[fmt])
        p.add_argument("word")
        p.set_defaults(handler=self.pair_case)
        p = pair_ops.add_parser("verify-table", parents=[fmt])
        p.add_argument("--r-max", type=int, default=config.DIFFEO_R_MAX)
        p.set_defaults(handler=self.pair_verify_table)

        oracle = commands.add_parser("oracle", help="cell complex computations")
        oracle_ops = oracle.add_subparsers(dest="op", required=True)
        p = oracle_ops.add_parser("pair", parents=[fmt])
        p.add_argument("word")
        p.add_argument("--show-complex", action="store_true")
        p.set_defaults(handler=self.oracle_pair)
        p = oracle_ops.add_parser("complex", parents=[fmt])
        p.add_argument("path", help="complex text file, - for stdin")
        p.set_defaults(handler=self.oracle_complex)
        p = oracle_ops.add_parser("blowup", parents=[fmt])
        p.add_argument("path", help="complex text file with a curve line, - for stdin")
        p.add_argument("--location", choices=[cellsurf.Location.OFF_CURVE, cellsurf.Location.ON_CURVE,
                                              cellsurf.Location.AT_NODE], required=True)
        p.add_argument("--face", type=int, default=0)
        p.add_argument("--position", type=int, default=0)
        p.add_argument("--node", type=int, default=0)
        p.set_defaults(handler=self.oracle_blowup)
        p = oracle_ops.add_parser("equator", parents=[fmt])
        p.add_argument("--g", type=int, required=True)
        p.add_argument("--resolve", action="store_true", help="blow up every node and classify")
        p.add_argument("--extra-crosscaps", type=int, default=0)
        p.set_defaults(handler=self.oracle_equator)
        p = oracle_ops.add_parser("verify-table", parents=[fmt])
        p.add_argument("--r-max", type=int, default=config.ORACLE_R_MAX)
        p.set_defaults(handler=self.oracle_verify_table)
        p = oracle_ops.add_parser("sweep", parents=[fmt])
        p.add_argument("--max-complexity", type=int, default=config.ORACLE_WORD_COMPLEXITY)
        p.set_defaults(handler=self.oracle_sweep)

        lattice = commands.add_parser("lattice", help="Picard lattice computations")
        lattice_ops = lattice.add_subparsers(dest="op", required=True)
        base = argparse.ArgumentParser(add_help=False, parents=[fmt])
        base.add_argument("--base", default="P2")
        base.add_argument("--blowups", default="", help="comma separated R, R*, C, C* (star: on the curve)")
        p = lattice_ops.add_parser("intersect", parents=[base])
        p.add_argument("--class", dest="classes", action="append", required=True, help="d:m1,m2,... (give twice)")
        p.set_defaults(handler=self.lattice_intersect)
        p = lattice_ops.add_parser("genus", parents=[base])
        p.add_argument("--class", dest="divisor", required=True)
        p.set_defaults(handler=self.lattice_genus)
        p = lattice_ops.add_parser("canonical", parents=[base])
        p.set_defaults(handler=self.lattice_canonical)
        p = lattice_ops.add_parser("topology", parents=[base])
        p.set_defaults(handler=self.lattice_topology)
        p = lattice_ops.add_parser("coble", parents=[fmt])
        p.add_argument("--d", type=int, required=True)
        p.add_argument("--real-nodes", type=int, default=None)
        p.set_defaults(handler=self.lattice_coble)
        p = lattice_ops.add_parser("tower", parents=[fmt])
        p.add_argument("--r", type=int, required=True)
        p.set_defaults(handler=self.lattice_tower)
        p = lattice_ops.add_parser("minus-two", parents=[fmt])
        p.add_argument("--raw", action="store_true", help="skip the reducibility filter")
        p.set_defaults(handler=self.lattice_minus_two)
        p = lattice_ops.add_parser("nodal-cubic", parents=[fmt])
        p.set_defaults(handler=self.lattice_nodal_cubic)

        program = commands.add_parser("mmp", help="minimal model program steps")
        program_ops = program.add_subparsers(dest="op", required=True)
        for name, handler in (("simulate", self.mmp_simulate), ("forward", self.mmp_forward),
                              ("contract", self.mmp_contract)):
            p = program_ops.add_parser(name, parents=[fmt])
            p.add_argument("--end-state", required=True, help="e.g. P2Line, P1BundleSection(3), MinusOne(T2)")
            p.add_argument("--steps", default="", help="comma separated inverse steps, e.g. RealOffCurve:L,RealOnCurve")
            p.set_defaults(handler=handler)

        p = commands.add_parser("table", parents=[fmt], help="table of types by self-intersection")
        p.add_argument("--emin", type=int, default=config.DEFAULT_E_MIN)
        p.add_argument("--emax", type=int, default=config.DEFAULT_E_MAX)
        p.add_argument("--bound", type=int, default=config.DEFAULT_BOUND)
        p.add_argument("--golden", action="store_true", help="compare with the reference table")
        p.add_argument("--golden-path", default=None)
        p.set_defaults(handler=self.table)

        p = commands.add_parser("classify", parents=[fmt], help="approximability verdict")
        p.add_argument("--pair", required=True, help="pair word")
        p.set_defaults(handler=self.classify)

        p = commands.add_parser("witness", parents=[fmt], help="replayable construction")
        p.add_argument("--pair", required=True, help="pair word")
        p.set_defaults(handler=self.witness)

        check = commands.add_parser("check", help="numeric parity checks")
        check_ops = check.add_subparsers(dest="op", required=True)
        p = check_ops.add_parser("dp2", parents=[fmt])
        p.add_argument("--a", type=int, required=True)
        p.set_defaults(handler=self.check_dp2)
        p = check_ops.add_parser("p1xp1", parents=[fmt])
        p.add_argument("--a1", type=int, required=True)
        p.add_argument("--a2", type=int, required=True)
        p.set_defaults(handler=self.check_p1xp1)
        return parser

    # --- pair ---
    def pair_normalize(self, args):
        return _pair(args.word)

    def pair_case(self, args):
        return pairalg.classify_case(_pair(args.word))

    def pair_verify_table(self, args):
        return pairalg.verify_diffeo_table(args.r_max)

    # --- oracle ---
    def oracle_pair(self, args):
        built = cellsurf.realize(args.word)
        result = {"pair": cellsurf.canonical_pair(built.surface, built.curve)}
        if args.show_complex:
            result["complex"] = cellsurf.format_complex(built.surface, built.curve)
        return result

    def oracle_complex(self, args):
        surface, curve = cellsurf.parse_complex(_read_text(args.path))
        result = dict(cellsurf.invariants(surface))
        result["surface"] = cellsurf.surface_of(surface)
        if curve is not None:
            result["crossings"] = len(cellsurf.crossings(surface, curve))
            if not result["crossings"]:
                result["pair"] = cellsurf.canonical_pair(surface, curve)
        return result

    def oracle_blowup(self, args):
        surface, curve = cellsurf.parse_complex(_read_text(args.path))
        if curve is None:
            raise cellsurf.InvalidComplex("blow-ups need a curve: line")
        surface, curve = cellsurf.blow_up_point(surface, curve, args.location, face=args.face,
                                                position=args.position, node=args.node)
        result = {"complex": cellsurf.format_complex(surface, curve),
                  "crossings": len(cellsurf.crossings(surface, curve))}
        if not result["crossings"]:
            result["pair"] = cellsurf.canonical_pair(surface, curve)
        return result

    def oracle_equator(self, args):
        result = cellsurf.equator_summary(args.g)
        if args.resolve:
            result["pair"] = cellsurf.equator_example(args.g, args.extra_crosscaps)
        return result

    def oracle_verify_table(self, args):
        return cellsurf.oracle_verify_diffeo_table(args.r_max)

    def oracle_sweep(self, args):
        report = cellsurf.oracle_sweep(args.max_complexity)
        if report["mismatches"]:
            raise pairalg.TableMismatch(f"{len(report['mismatches'])} words disagree with the oracle",
                                        mismatches=report["mismatches"][:20])
        return report

    # --- lattice ---
    def lattice_intersect(self, args):
        if len(args.classes) != 2:
            raise piclattice.DimensionMismatch("intersect needs exactly two --class values")
        L = _lattice(args)
        a, b = (piclattice.parse_class(L, text) for text in args.classes)
        return {"lattice": L, "a": a, "b": b, "intersection": piclattice.intersect(L, a, b)}

    def lattice_genus(self, args):
        L = _lattice(args)
        c = piclattice.parse_class(L, args.divisor)
        return {"lattice": L, "class": c, "csq": piclattice.intersect(L, c, c),
                "p_a": piclattice.arithmetic_genus(L, c)}

    def lattice_canonical(self, args):
        L = _lattice(args)
        k = piclattice.canonical_class(L)
        return {"lattice": L, "canonical": k, "k_squared": piclattice.intersect(L, k, k)}

    def lattice_topology(self, args):
        L = _lattice(args)
        return {"lattice": L, "real_locus": piclattice.real_topology(L)}

    def lattice_coble(self, args):
        return piclattice.coble_example(args.d, args.real_nodes)

    def lattice_tower(self, args):
        return piclattice.tower_example(args.r)

    def lattice_minus_two(self, args):
        return piclattice.minus_two_solutions(reducibility_filter=not args.raw)

    def lattice_nodal_cubic(self, args):
        return piclattice.nodal_cubic_example()

    # --- mmp ---
    def mmp_simulate(self, args):
        return mmp.simulate(mmp.parse_end_state(args.end_state), _steps(args.steps))

    def mmp_forward(self, args):
        state = mmp.replay(mmp.parse_end_state(args.end_state), _steps(args.steps))
        trace, terminal = mmp.run_forward(state)
        return {"trace": trace, "terminal": terminal.pair}

    def mmp_contract(self, args):
        state = mmp.replay(mmp.parse_end_state(args.end_state), _steps(args.steps))
        return mmp.apply_forward_step(state, "C")

    # --- enumeration ---
    def table(self, args):
        table = enumeration.theorem_table(args.emin, args.emax, args.bound)
        if not args.golden:
            return table
        differences = GoldenTable(args.golden_path).compare(table)
        self.emit(table, args.format)
        if differences:
            raise GoldenMismatch(f"{len(differences)} rows differ from the reference table",
                                 differences=differences)
        return None

    def classify(self, args):
        return enumeration.classify_approximable(_pair(args.pair))

    def witness(self, args):
        target = _pair(args.pair)
        plan = enumeration.witness(target)
        return {"target": target, "plan": plan}

    # --- check ---
    def check_dp2(self, args):
        return piclattice.dp2_check(args.a)

    def check_p1xp1(self, args):
        return piclattice.p1xp1_parity_check(args.a1, args.a2)

    def emit(self, result, fmt):
        if fmt == "text":
            text = result.format_text() if hasattr(result, "format_text") else render_text(codec.encode(result))
            print(text, file=self.out)
        else:
            print(codec.dumps(result), file=self.out)

    def report_error(self, error):
        print(json.dumps(error.to_dict(), default=str, ensure_ascii=False), file=self.err)

    def run(self, argv=None):
        """
        Parse arguments and run one command

        Args:
            argv: Argument list without the program name (defaults to sys.argv[1:])

        Returns:
            int: Exit code
        """
        try:
            args = self.parser.parse_args(argv)
        except SystemExit as e:
            return EXIT_PARSE_ERROR if e.code else EXIT_OK

        logger.info(f"Running {args.command} {getattr(args, 'op', '') or ''}".rstrip())
        try:
            result = args.handler(args)
        except pairalg.ParseError as e:
            self.report_error(e)
            return EXIT_PARSE_ERROR
        except (ValueError, OSError) as e:
            self.report_error(pairalg.ParseError(str(e)))
            return EXIT_PARSE_ERROR
        except RealPairsError as e:
            logger.debug(f"{e.code}: {e.message}")
            self.report_error(e)
            return EXIT_DOMAIN_ERROR
        if result is not None:
            self.emit(result, args.format)
        return EXIT_OK


def main(argv=None):
    return RealPairsCli().run(argv)
