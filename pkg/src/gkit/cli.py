"""Command dispatch and deterministic JSON emission.

A run parses one script, executes its statements in order, and writes one
JSON document per command (JSON lines, keys sorted) to --out or stdout.
Failures become structured error objects and a nonzero exit status; output
for a fixed (script, flags, seed) is byte-identical across runs.

Resource limits come from the environment (GKIT_MONOMIAL_CAP,
GKIT_SYMBOL_CAP); everything else flows through flags.
"""

import argparse
import json
import os
import sys

from . import cohen, greenberg, selftest, units, witt
from .base import ArtinianBase, make_eisenstein, make_unramified
from .basefield import PrimeParams
from .errors import (
    GkitError,
    TypeMismatch,
    UnknownIdentifier,
)
from .dsl import parse
from .rings import FieldRing, IntegerRing


class SessionConfig:
    def __init__(self, jobs=1, seed=0, stage=0, monomial_cap=None, symbol_cap=None):
        if jobs < 1:
            raise TypeMismatch("--jobs must be >= 1")
        if stage < 0:
            raise TypeMismatch("--stage must be >= 0")
        self.jobs = jobs
        self.seed = seed
        self.stage = stage
        self.monomial_cap = (
            monomial_cap if monomial_cap is not None else greenberg.DEFAULT_MONOMIAL_CAP
        )
        self.symbol_cap = (
            symbol_cap if symbol_cap is not None else greenberg.DEFAULT_SYMBOL_CAP
        )

    @classmethod
    def from_env(cls, jobs=1, seed=0, stage=0, env=os.environ):
        def cap(name):
            raw = env.get(name)
            return int(raw) if raw else None

        return cls(jobs, seed, stage, cap("GKIT_MONOMIAL_CAP"), cap("GKIT_SYMBOL_CAP"))


# ---------------------------------------------------------------------------
# Serialization (stable, string-based)
# ---------------------------------------------------------------------------


def cohen_to_json(c):
    coords = {}
    for (j, i), x in c.sorted_coords():
        key = ",".join(str(v) for v in (j,) + i)
        coords[key] = c.ring.to_string(x)
    return {"n": c.level - 1, "coords": coords}


def base_elem_to_json(b):
    return {"components": [cohen_to_json(c) for c in b.components]}


def witt_to_json(w):
    if isinstance(w.ring, IntegerRing):
        return list(w.entries)
    return [w.ring.to_string(e) for e in w.entries]


# ---------------------------------------------------------------------------
# Expression evaluation
# ---------------------------------------------------------------------------


def eval_int(ast):
    kind = ast[0]
    if kind == "int":
        return ast[1]
    if kind == "neg":
        return -eval_int(ast[1])
    if kind == "pow":
        return eval_int(ast[1]) ** ast[2]
    if kind == "bin":
        a, b = eval_int(ast[2]), eval_int(ast[3])
        if ast[1] == "+":
            return a + b
        if ast[1] == "-":
            return a - b
        if ast[1] == "*":
            return a * b
        raise TypeMismatch("integer expressions do not support '/'")
    raise TypeMismatch(f"expected an integer expression, found {kind}")


def eval_k(ast, params):
    kind = ast[0]
    if kind == "int":
        return params.from_int(ast[1])
    if kind == "name":
        if ast[1] in params.names:
            return params.gen(params.names.index(ast[1]))
        raise UnknownIdentifier(f"unknown residue-field name {ast[1]!r}")
    if kind == "neg":
        return -eval_k(ast[1], params)
    if kind == "pow":
        return eval_k(ast[1], params) ** ast[2]
    if kind == "bin":
        a, b = eval_k(ast[2], params), eval_k(ast[3], params)
        if ast[1] == "+":
            return a + b
        if ast[1] == "-":
            return a - b
        if ast[1] == "*":
            return a * b
        return a / b
    raise TypeMismatch(f"not a residue-field expression: {kind}")


class VarPoly:
    """A polynomial in scheme variables with base-ring coefficients."""

    def __init__(self, algebra, nvars, terms):
        self.algebra = algebra
        self.nvars = nvars
        self.terms = terms  # exps tuple -> BaseElem

    @classmethod
    def constant(cls, algebra, nvars, value):
        if value.is_zero():
            return cls(algebra, nvars, {})
        return cls(algebra, nvars, {(0,) * nvars: value})

    @classmethod
    def variable(cls, algebra, nvars, index):
        e = [0] * nvars
        e[index] = 1
        return cls(algebra, nvars, {tuple(e): algebra.one()})

    def _merge(self, exps, value, terms):
        prev = terms.get(exps)
        s = prev + value if prev is not None else value
        if s.is_zero():
            terms.pop(exps, None)
        else:
            terms[exps] = s

    def __add__(self, other):
        terms = dict(self.terms)
        for e, v in other.terms.items():
            self._merge(e, v, terms)
        return VarPoly(self.algebra, self.nvars, terms)

    def __neg__(self):
        return VarPoly(self.algebra, self.nvars, {e: -v for e, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        terms = {}
        for e1, v1 in self.terms.items():
            for e2, v2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                self._merge(e, v1 * v2, terms)
        return VarPoly(self.algebra, self.nvars, terms)

    def __pow__(self, n):
        out = VarPoly.constant(self.algebra, self.nvars, self.algebra.one())
        base = self
        while n:
            if n & 1:
                out = out * base
            n >>= 1
            if n:
                base = base * base
        return out


def eval_ring_poly(ast, session, base, variables):
    """Evaluate an expression over a base ring, with scheme variables."""
    algebra = base.algebra()
    nvars = len(variables)

    def const(v):
        return VarPoly.constant(algebra, nvars, v)

    def walk(node):
        kind = node[0]
        if kind == "int":
            return const(algebra.from_int(node[1]))
        if kind == "name":
            name = node[1]
            if name in variables:
                return VarPoly.variable(algebra, nvars, variables.index(name))
            if name == "p":
                return const(algebra.p())
            if name == "pi":
                return const(algebra.pi())
            if name in session.elems:
                ring_name, value = session.elems[name]
                if session.rings[ring_name] != base:
                    raise TypeMismatch(
                        f"element {name!r} lives over ring {ring_name!r}"
                    )
                return const(value)
            if name in session.params.names:
                raise TypeMismatch(
                    f"residue-field element {name!r} needs teich(..) in ring context"
                )
            raise UnknownIdentifier(f"unknown name {name!r}")
        if kind == "call":
            if node[1] == "teich":
                if len(node[2]) != 1:
                    raise TypeMismatch("teich takes one argument")
                return const(algebra.teich(eval_k(node[2][0], session.params)))
            raise UnknownIdentifier(f"unknown function {node[1]!r}")
        if kind == "neg":
            return -walk(node[1])
        if kind == "pow":
            return walk(node[1]) ** node[2]
        if kind == "bin":
            a, b = walk(node[2]), walk(node[3])
            if node[1] == "+":
                return a + b
            if node[1] == "-":
                return a - b
            if node[1] == "*":
                return a * b
            raise TypeMismatch("ring expressions do not support '/'")
        raise TypeMismatch(f"bad expression node {kind}")

    return walk(ast)


def eval_base_elem(ast, session, base):
    poly = eval_ring_poly(ast, session, base, [])
    return poly.terms.get((), base.algebra().zero())


def eval_pi_poly(ast, session, m):
    """Evaluate an Eisenstein defining polynomial as {pi-degree: C_m(k)}."""
    K = FieldRing(session.params)

    def const(c):
        return {0: c}

    def add(a, b):
        out = dict(a)
        for deg, c in b.items():
            out[deg] = cohen.cohen_add(out[deg], c) if deg in out else c
        return out

    def neg(a):
        return {deg: cohen.cohen_neg(c) for deg, c in a.items()}

    def mul(a, b):
        out = {}
        for d1, c1 in a.items():
            for d2, c2 in b.items():
                prod = cohen.cohen_mul(c1, c2)
                deg = d1 + d2
                out[deg] = cohen.cohen_add(out[deg], prod) if deg in out else prod
        return out

    def walk(node):
        kind = node[0]
        if kind == "int":
            return const(cohen.cohen_from_int(K, m, node[1]))
        if kind == "name":
            if node[1] == "pi":
                return {1: cohen.teich_lift(K, m, session.params.one())}
            if node[1] == "p":
                return const(cohen.cohen_from_int(K, m, session.params.p))
            raise UnknownIdentifier(f"unknown name {node[1]!r} in E")
        if kind == "call" and node[1] == "teich":
            return const(cohen.teich_lift(K, m, eval_k(node[2][0], session.params)))
        if kind == "neg":
            return neg(walk(node[1]))
        if kind == "pow":
            out = const(cohen.teich_lift(K, m, session.params.one()))
            for _ in range(node[2]):
                out = mul(out, walk(node[1]))
            return out
        if kind == "bin":
            a, b = walk(node[2]), walk(node[3])
            if node[1] == "+":
                return add(a, b)
            if node[1] == "-":
                return add(a, neg(b))
            if node[1] == "*":
                return mul(a, b)
            raise TypeMismatch("E does not support '/'")
        raise TypeMismatch(f"bad E node {kind}")

    return walk(ast)


# ---------------------------------------------------------------------------
# Session
# ---------------------------------------------------------------------------


class Session:
    def __init__(self, config: SessionConfig):
        self.config = config
        self.params = None
        self.rings = {}
        self.schemes = {}
        self.elems = {}
        self._presentations = {}
        self.results = []
        self.failed = False

    # -- declarations --------------------------------------------------------

    def declare_base(self, decl):
        self.params = PrimeParams(decl["p"], len(decl["names"]), decl["names"])

    def _need_base(self):
        if self.params is None:
            raise TypeMismatch("no base {..} declaration yet")
        return self.params

    def declare_ring(self, decl):
        self._need_base()
        if decl["kind"] == "unramified":
            ring = make_unramified(self.params, decl["m"])
        else:
            poly = eval_pi_poly(decl["E"], self, decl["m"])
            deg = max(poly)
            K = FieldRing(self.params)
            one = cohen.teich_lift(K, decl["m"], self.params.one())
            if poly.get(deg) != one:
                from .errors import NotEisenstein

                raise NotEisenstein("E must be monic in pi")
            coeffs = [
                poly.get(i, cohen.CohenElem.zero(K, decl["m"])) for i in range(deg)
            ]
            ring = make_eisenstein(self.params, decl["m"], coeffs)
        self.rings[decl["name"]] = ring

    def declare_scheme(self, decl):
        base = self.ring(decl["ring"])
        variables = decl["vars"]
        equations = []
        for ast in decl["eqs"]:
            poly = eval_ring_poly(ast, self, base, variables)
            equations.append(poly.terms)
        self.schemes[decl["name"]] = greenberg.AffinePresentation(
            base, variables, equations
        )

    def declare_elem(self, decl):
        base_name = decl["ring"] or self._only_ring_name()
        base = self.ring(base_name)
        self.elems[decl["name"]] = (base_name, eval_base_elem(decl["expr"], self, base))

    def ring(self, name) -> ArtinianBase:
        if name not in self.rings:
            raise UnknownIdentifier(f"unknown ring {name!r}")
        return self.rings[name]

    def scheme(self, name):
        if name not in self.schemes:
            raise UnknownIdentifier(f"unknown scheme {name!r}")
        return self.schemes[name]

    def _only_ring_name(self):
        if len(self.rings) == 1:
            return next(iter(self.rings))
        if not self.rings:
            raise TypeMismatch("no ring declared")
        raise TypeMismatch("several rings declared; use 'over <ring>' or --ring")

    def presentation(self, scheme_name, stage):
        key = (scheme_name, stage)
        if key not in self._presentations:
            self._presentations[key] = greenberg.greenberg_transform(
                self.scheme(scheme_name),
                stage=stage,
                jobs=self.config.jobs,
                monomial_cap=self.config.monomial_cap,
                symbol_cap=self.config.symbol_cap,
            )
        return self._presentations[key]

    # -- commands --------------------------------------------------------------

    def run_command(self, cmd):
        kind = cmd["kind"]
        record = {"cmd": kind}
        try:
            record.update(self._dispatch(cmd))
            record["status"] = "ok"
        except GkitError as exc:
            record["status"] = "error"
            record["error"] = exc.payload()
            self.failed = True
        self.results.append(record)
        return record

    def _witt_vector(self, entries_ast, flags):
        ring_name = flags.get("ring", "k")
        if ring_name == "int":
            ring = IntegerRing()
            witt.set_ambient_prime(ring, self._need_base().p)
            return witt.WittVector(ring, tuple(eval_int(a) for a in entries_ast))
        if ring_name == "k":
            params = self._need_base()
            ring = FieldRing(params)
            return witt.WittVector(ring, tuple(eval_k(a, params) for a in entries_ast))
        raise TypeMismatch(f"unknown --ring {ring_name!r} (use k or int)")

    def _unit_arg(self, cmd):
        flags = cmd["flags"]
        base = self.ring(flags["ring"]) if "ring" in flags else self.ring(self._only_ring_name())
        return eval_base_elem(cmd["expr"], self, base)

    def _dispatch(self, cmd):
        kind = cmd["kind"]
        flags = cmd.get("flags", {})
        if kind == "selftest":
            seed = flags.get("seed", self.config.seed)
            report = selftest.run_selftest(seed)
            if not report["ok"]:
                self.failed = True
            return {"report": report}

        if kind.startswith("witt."):
            op = kind.split(".", 1)[1]
            if op == "teich":
                params = self._need_base()
                length = flags.get("len", 2)
                value = eval_k(cmd["expr"], params)
                return {"result": witt_to_json(witt.teichmuller(FieldRing(params), value, length))}
            if op == "ghost":
                vec = self._witt_vector(cmd["vectors"][0], {"ring": flags.get("ring", "int")})
                g = witt.ghost(cmd["r"], vec)
                return {"result": g if isinstance(g, int) else str(g)}
            vecs = [self._witt_vector(v, flags) for v in cmd["vectors"]]
            if op == "add":
                return {"result": witt_to_json(witt.witt_add(*vecs))}
            if op == "mul":
                return {"result": witt_to_json(witt.witt_mul(*vecs))}
            if op == "neg":
                return {"result": witt_to_json(witt.witt_neg(vecs[0]))}
            if op == "v":
                return {"result": witt_to_json(witt.verschiebung(vecs[0]))}
            if op == "f":
                return {"result": witt_to_json(witt.frobenius(vecs[0]))}

        if kind.startswith("cohen."):
            op = kind.split(".", 1)[1]
            vecs = [self._witt_vector(v, {"ring": "k"}) for v in cmd["vectors"]]
            elems = [cohen.extract(v) for v in vecs]
            if op == "extract":
                return {"result": cohen_to_json(elems[0])}
            if op == "add":
                return {"result": cohen_to_json(cohen.cohen_add(*elems))}
            if op == "mul":
                return {"result": cohen_to_json(cohen.cohen_mul(*elems))}
            if op == "embed":
                target = flags.get("to", elems[0].level + 1)
                return {"result": cohen_to_json(cohen.ver_embed(elems[0], target))}
            if op == "pdiv":
                e = flags.get("e", 1)
                return {"result": cohen_to_json(cohen.solve_p_division(elems[0], e))}
            if op == "residue":
                return {"result": str(cohen.residue(elems[0]))}

        if kind == "greenberg":
            stage = flags.get("stage", self.config.stage)
            pres = self.presentation(cmd["scheme"], stage)
            doc = pres.to_json()
            out = flags.get("out")
            summary = {
                "scheme": cmd["scheme"],
                "stage": stage,
                "symbols": len(pres.symbols),
                "equations": len(pres.equations),
            }
            if out:
                with open(out, "w") as fh:
                    json.dump(doc, fh, sort_keys=True, indent=1)
                    fh.write("\n")
                summary["written"] = out
            else:
                summary["presentation"] = doc
            return summary

        if kind == "point.push":
            stage = flags.get("stage", self.config.stage)
            X = self.scheme(cmd["scheme"])
            pres = self.presentation(cmd["scheme"], stage)
            point = [eval_base_elem(a, self, X.base) for a in cmd["vector"]]
            if len(point) != len(X.variables):
                raise TypeMismatch(f"expected {len(X.variables)} coordinates")
            coords = greenberg.point_to_coords(X, pres, point)
            return {"coords": [str(c) for c in coords], "stage": stage}

        if kind == "point.pull":
            stage = flags.get("stage", self.config.stage)
            X = self.scheme(cmd["scheme"])
            pres = self.presentation(cmd["scheme"], stage)
            params = self._need_base()
            values = [eval_k(a, params) for a in cmd["vector"]]
            if len(values) != len(pres.symbols):
                raise TypeMismatch(
                    f"expected {len(pres.symbols)} coordinates, got {len(values)}"
                )
            point = greenberg.coords_to_point(X, pres, values)
            return {
                "point": [base_elem_to_json(v) for v in point],
                "stage": stage,
                "verified": True,
            }

        if kind == "units.level":
            u = self._unit_arg(cmd)
            level = units.unit_level(u)
            return {"level": "infinity" if level is None else level}

        if kind == "units.ppow-solve":
            if "n" not in flags:
                raise TypeMismatch("units ppow-solve needs --n")
            v = self._unit_arg(cmd)
            u = units.p_power_solve(v, flags["n"])
            return {"solution": base_elem_to_json(u), "verified": True}

        raise TypeMismatch(f"unknown command {kind!r}")


def run_script(text, config: SessionConfig):
    """Parse and execute; returns (session, records)."""
    statements = parse(text)
    session = Session(config)
    for kind, payload in statements:
        if kind == "base":
            session.declare_base(payload)
        elif kind == "ring":
            session.declare_ring(payload)
        elif kind == "scheme":
            session.declare_scheme(payload)
        elif kind == "elem":
            session.declare_elem(payload)
        elif kind == "cmd":
            session.run_command(payload)
    return session


def _emit(records, stream):
    for record in records:
        stream.write(json.dumps(record, sort_keys=True, separators=(",", ":")))
        stream.write("\n")


def main(argv=None):
    ap = argparse.ArgumentParser(
        prog="gkit",
        description="exact Witt/Cohen/Greenberg computations over F_p(t_1..t_d)",
    )
    ap.add_argument("shortcut", nargs="?", choices=["selftest"], help="run the selftest without a script")
    ap.add_argument("--script", help="script file to execute")
    ap.add_argument("--out", help="write JSON lines here instead of stdout")
    ap.add_argument("--jobs", type=int, default=1, help="parallel equation expansion")
    ap.add_argument("--seed", type=int, default=0, help="seed for randomized suites")
    ap.add_argument("--stage", type=int, default=0, help="default restriction stage")
    args = ap.parse_args(argv)

    if args.shortcut == "selftest":
        text = "selftest;"
    elif args.script:
        with open(args.script) as fh:
            text = fh.read()
    else:
        ap.error("need --script FILE or the selftest shortcut")

    config = SessionConfig.from_env(jobs=args.jobs, seed=args.seed, stage=args.stage)
    try:
        session = run_script(text, config)
        records = session.results
        failed = session.failed
    except GkitError as exc:
        records = [{"status": "error", "error": exc.payload()}]
        failed = True

    if args.out:
        with open(args.out, "w") as fh:
            _emit(records, fh)
    else:
        _emit(records, sys.stdout)
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
