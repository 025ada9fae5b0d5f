# main.py - ploi command line
import sys
import time
import logging
import argparse

from config import VERSION
from utils import enable_debug_console, format_duration, setup_logging
from settings_manager import get_settings, reset_settings
from certificate_check import verify_certificate

from plgroup_module.analysis.analyzer import analyze, parse_generators, tower_search
from plgroup_module.constructions.builders import (alpha, beta, beta0, beta_family, gamma_family,
                                                   upsilon_family, wn_generators, wreath_insert)
from plgroup_module.constructions.embedproc import extract_b, tower_to_wn, w_witness
from plgroup_module.core.dynamics import orbitals_of_element
from plgroup_module.core.errors import (CertificateRejected, InputFormatError, PLGroupError,
                                        PreconditionError)
from plgroup_module.core.plmap import PLMap, commutator, conjugate, make_plmap
from plgroup_module.core.structures import Tower
from plgroup_module.utils.serialization import dumps, format_rational, loads, parse_rational, read_json
from plgroup_module.utils.svg_plot import render_maps, write_svg

BUILD_TARGETS = ("alpha", "beta0", "beta", "betas", "wn", "gamma", "upsilon", "insert")


# ----- input helpers -----

def read_input(path):
    """JSON from a file, or from stdin when path is None or '-'"""
    if path in (None, "-"):
        text = sys.stdin.read()
        if not text.strip():
            raise InputFormatError("No input on stdin")
        return loads(text)
    return read_json(path)


def to_map(data):
    """PLMap JSON or a bare [[x, y], ...] point list"""
    if isinstance(data, dict) and data.get("kind", "plmap") == "plmap":
        return PLMap.from_dict(data)
    if isinstance(data, list):
        return make_plmap(data)
    raise InputFormatError("Expected a PLMap object")


def to_maps(data):
    """Every map a file carries: a PLMap, a generator list or a family"""
    if isinstance(data, dict) and data.get("kind") == "family":
        return [PLMap.from_dict(m) for m in data.get("members", [])]
    if isinstance(data, dict) and "breakpoints" in data:
        return [to_map(data)]
    return parse_generators(data)


def _positive(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


# ----- application -----

class PloiCLI:
    """Subcommand dispatch; every handler returns a JSON-ready object or text"""

    def __init__(self, args):
        self.args = args
        self.max_elements = getattr(args, "max_elements", None)

    def run(self):
        handler = getattr(self, "cmd_" + self.args.command.replace("-", "_"))
        start = time.time()
        result = handler()
        logging.debug(f"{self.args.command} finished in {format_duration(time.time() - start)}")
        self.emit(result)
        return 0

    def emit(self, result):
        if result is None:
            return
        if isinstance(result, str):
            text = result if result.endswith("\n") else result + "\n"
        else:
            text = dumps(result)
        out = getattr(self.args, "out", None)
        if out:
            with open(out, "w", encoding="utf-8") as f:
                f.write(text)
            logging.info(f"📁 Output saved: {out}")
        else:
            sys.stdout.write(text)

    # ----- build -----

    def cmd_build(self):
        target, param = self.args.target, self.args.param
        if target in ("beta", "wn", "gamma", "upsilon") and param is None:
            raise InputFormatError(f"build {target} needs an integer parameter")
        if target == "alpha":
            return alpha().to_dict()
        if target == "beta0":
            return beta0().to_dict()
        if target == "beta":
            return beta(param).to_dict()
        if target == "betas":
            if not self.args.ks:
                raise InputFormatError("build betas needs --ks, e.g. --ks 0,2,5")
            try:
                ks = [int(k) for k in self.args.ks.split(",")]
            except ValueError:
                raise InputFormatError(f"Bad --ks list: {self.args.ks}")
            return beta_family(ks).to_dict()
        if target == "wn":
            return wn_generators(param).to_dict()
        if target == "gamma":
            return gamma_family(param).to_dict()
        if target == "upsilon":
            return upsilon_family(param).to_dict()
        gens = to_maps(read_input(self.args.gens))
        return wreath_insert(gens).to_dict()

    # ----- map arithmetic -----

    def cmd_eval(self):
        g = to_map(read_input(self.args.map))
        x = parse_rational(self.args.at)
        y = g.evaluate_inverse(x) if self.args.inverse else g.evaluate(x)
        return format_rational(y)

    def cmd_compose(self):
        maps = [to_map(read_input(path)) for path in self.args.maps]
        result = maps[0]
        for g in maps[1:]:
            result = result.compose(g)
        return result.to_dict()

    def cmd_inverse(self):
        return to_map(read_input(self.args.map)).inverse().to_dict()

    def cmd_power(self):
        return to_map(read_input(self.args.map)).power(self.args.n).to_dict()

    def cmd_conj(self):
        g, h = to_map(read_input(self.args.g)), to_map(read_input(self.args.h))
        return conjugate(g, h).to_dict()

    def cmd_comm(self):
        g, h = to_map(read_input(self.args.g)), to_map(read_input(self.args.h))
        return commutator(g, h).to_dict()

    def cmd_orbitals(self):
        g = to_map(read_input(self.args.map))
        return [o.to_dict() for o in orbitals_of_element(g)]

    # ----- searches and drivers -----

    def cmd_analyze(self):
        gens = to_maps(read_input(self.args.gens))
        report = analyze(gens, radius=self.args.radius, tower_height=self.args.tower_height,
                         threshold=self.args.threshold, max_elements=self.max_elements,
                         progress=self.args.progress)
        return report.to_dict()

    def cmd_certify(self):
        data = read_input(self.args.file)
        if self.args.kind == "b" and isinstance(data, dict) and data.get("kind") == "extract_b":
            data = data.get("certificate")
        if not verify_certificate(self.args.kind, data):
            raise CertificateRejected(f"{self.args.kind} certificate rejected", file=self.args.file)
        return {"kind": "certify", "certificate": self.args.kind, "valid": True}

    def cmd_extract_b(self):
        gens = to_maps(read_input(self.args.gens))
        if len(gens) != 2:
            raise PreconditionError("extract-b needs exactly two generators", count=len(gens))
        a_new, gamma, cert, trace = extract_b(gens[0], gens[1], chain_radius=self.args.radius,
                                              max_elements=self.max_elements)
        return {
            "kind": "extract_b",
            "a": a_new.to_dict(),
            "gamma": gamma.to_dict(),
            "certificate": cert.to_dict(),
            "trace": trace.to_dict(),
        }

    def cmd_tower_to_wn(self):
        if self.args.tower:
            tower = Tower.from_dict(read_input(self.args.tower))
        else:
            gens = to_maps(read_input(self.args.gens))
            tower = tower_search(gens, self.args.radius or 3, self.args.height,
                                 max_elements=self.max_elements, progress=self.args.progress)
            if tower is None:
                raise PreconditionError("No tower found within the search radius")
        return tower_to_wn(tower).to_dict()

    def cmd_witness(self):
        gens = to_maps(read_input(self.args.gens))
        result = w_witness(gens, heights=self.args.heights, radius=self.args.radius,
                           max_elements=self.max_elements)
        return result.to_dict()

    def cmd_plot(self):
        sources = self.args.maps or ["-"]
        maps = [g for path in sources for g in to_maps(read_input(path))]
        names = self.args.names.split(",") if self.args.names else ()
        if self.args.out:
            write_svg(self.args.out, maps, names, width=self.args.width, height=self.args.height)
            return None
        return render_maps(maps, names, width=self.args.width, height=self.args.height)


# ----- argument parsing -----

def build_parser():
    parser = argparse.ArgumentParser(prog="ploi", description="Exact PL₀(I) toolkit")
    parser.add_argument("--version", action="version", version=f"ploi {VERSION}")
    parser.add_argument("--log-level", default=None, help="console log level (default PLOI_LOG_LEVEL)")
    parser.add_argument("--log-file", default=None, help="debug log path (default PLOI_LOG_FILE)")
    parser.add_argument("--settings", default=None, help="JSON settings override file")
    parser.add_argument("--max-elements", type=_positive, default=None, help="ball size cap")
    parser.add_argument("--progress", action="store_true", help="progress bars on stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        return p

    p = command("build", "emit a named map or family")
    p.add_argument("target", choices=BUILD_TARGETS)
    p.add_argument("param", nargs="?", type=int, default=None)
    p.add_argument("--gens", default="-", help="generators for 'insert'")
    p.add_argument("--ks", default=None, help="comma separated indices for 'betas'")

    p = command("eval", "evaluate a map at a point")
    p.add_argument("--map", default="-")
    p.add_argument("--at", required=True)
    p.add_argument("--inverse", action="store_true")

    p = command("compose", "compose maps left to right")
    p.add_argument("maps", nargs="+")

    p = command("inverse", "inverse map")
    p.add_argument("map", nargs="?", default="-")

    p = command("power", "integer power of a map")
    p.add_argument("map")
    p.add_argument("n", type=int)

    for name, help_text in (("conj", "conjugate g^h"), ("comm", "commutator [g,h]")):
        p = command(name, help_text)
        p.add_argument("g")
        p.add_argument("h")

    p = command("orbitals", "orbitals of a map")
    p.add_argument("map", nargs="?", default="-")

    p = command("analyze", "bounded whole-group report")
    p.add_argument("--gens", default="-")
    p.add_argument("--radius", type=_positive, default=None)
    p.add_argument("--tower-height", type=_positive, default=None)
    p.add_argument("--threshold", type=int, default=None)
    p.add_argument("--report", dest="out", default=None)

    p = command("certify", "re-verify a certificate file")
    p.add_argument("kind", choices=("wreath", "b", "tower", "chain", "family"))
    p.add_argument("--file", default="-")

    p = command("extract-b", "find a copy of B in a two-generator group")
    p.add_argument("--gens", default="-")
    p.add_argument("--radius", type=_positive, default=None)

    p = command("tower-to-wn", "improve a finite tower into W_n generators")
    p.add_argument("--tower", default=None)
    p.add_argument("--gens", default="-")
    p.add_argument("--radius", type=_positive, default=None)
    p.add_argument("--height", type=_positive, default=None)

    p = command("witness", "families for W_1 .. W_m with disjoint supports")
    p.add_argument("--gens", default="-")
    p.add_argument("--heights", type=_positive, default=None)
    p.add_argument("--radius", type=_positive, default=None)

    p = command("plot", "SVG of superimposed map graphs")
    p.add_argument("maps", nargs="*")
    p.add_argument("--names", default=None, help="comma separated labels")
    p.add_argument("--width", type=_positive, default=None)
    p.add_argument("--height", type=_positive, default=None)

    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, args.log_file)

    try:
        settings = reset_settings(args.settings) if args.settings else get_settings()
        if not settings.validate_settings():
            raise InputFormatError("Settings failed validation: budgets must be positive integers")
        if settings.get("advanced.debug_logging") and args.log_level is None:
            enable_debug_console()
        return PloiCLI(args).run()

    except PLGroupError as e:
        logging.error(f"❌ {e}")
        sys.stderr.write(dumps(e.to_dict()))
        return e.exit_code


if __name__ == "__main__":
    sys.exit(main())
