"""Command line entry point: ``bethelab <task> --config <path>``.

A config is a JSON object; every key is optional and falls back to the task
defaults below.  Rationals are ``"p/r"`` strings, complex floats ``[re, im]``.

    N, q, L, xi, n, params   model and Bethe parameters (random when absent)
    backend                  "exact" or "float"
    seed                     seed for the random rational points
    points                   number of random points per check
    ranks, lengths, sizes    sweeps for check-rmatrix / check-rtt / check-identities
    guesses, starts          Newton starting points for onshell ("params": "solve")
    tolerance                float-backend pass threshold
    z                        spectral points for the eigenvector checks
    output                   report path (``--out`` wins)

The report lists every check with its residual, tolerance and verdict; the
exit code is 0 iff all checks pass.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from typing import Callable

import numpy as np

from . import __version__, bethe, chain, field, kernel, onshell, partitions, rmatrix, words
from ._kernels import jit_enabled, set_jit
from .errors import BetheLabError, ConfigError

TASKS = ("check-rmatrix", "check-rtt", "check-identities", "compare-bv",
         "check-morphisms", "onshell", "bench")

DEFAULT_TOL = 1e-9


class Context:
    """Parsed config plus the report being assembled."""

    def __init__(self, task: str, cfg: dict):
        self.task = task
        self.cfg = cfg
        self.backend = cfg.get("backend", field.EXACT)
        if self.backend not in field.BACKENDS:
            raise ConfigError(f"unknown backend {self.backend!r}")
        self.seed = int(cfg.get("seed", 0))
        self.rng = np.random.default_rng(self.seed)
        self.tol = float(cfg.get("tolerance", DEFAULT_TOL))
        self.checks: list = []
        self.counts: dict = {}
        self.timings: dict = {}
        self.echo: dict = {}

    def get(self, key, default=None):
        return self.cfg.get(key, default)

    def scalar(self, x):
        return field.parse_scalar(x, self.backend)

    def rationals(self, count, exclude=()):
        vals = field.random_rationals(self.rng, count, exclude=exclude)
        return [self.scalar(v) for v in vals]

    def q(self):
        if "q" in self.cfg:
            return self.scalar(self.cfg["q"])
        return self.scalar(field.random_q(self.rng))

    def record(self, name: str, residual, threshold=None, extra=None) -> bool:
        if threshold is None:
            threshold = 0 if self.backend == field.EXACT else self.tol
        if isinstance(residual, bool):
            passed, value = residual, residual
        else:
            passed = bool(abs(residual) <= threshold)
            value = {"value": field.to_json(residual) if not isinstance(residual, float)
                     else residual, "backend": self.backend}
        entry = {"name": name, "residual": value, "tolerance": threshold, "passed": passed}
        if extra:
            entry.update(extra)
        self.checks.append(entry)
        return passed

    def guarded(self, name: str, fn: Callable) -> None:
        """Run one check; errors are recorded as failures without aborting."""
        start = time.perf_counter()
        try:
            fn()
        except (BetheLabError, ArithmeticError, ValueError) as exc:
            self.checks.append({"name": name, "passed": False,
                                "error": f"{type(exc).__name__}: {exc}"})
        self.timings[name] = time.perf_counter() - start

    def report(self) -> dict:
        return {
            "task": self.task,
            "tool_version": __version__,
            "backend": self.backend,
            "seed": self.seed,
            "inputs": self.echo,
            "checks": self.checks,
            "counts": self.counts,
            "timings": self.timings,
            "passed": all(c["passed"] for c in self.checks),
        }


def _model(ctx: Context, N: int, L: int, exclude=()) -> chain.ChainModel:
    q = ctx.q()
    if "xi" in ctx.cfg:
        xi = [ctx.scalar(x) for x in ctx.cfg["xi"]]
    else:
        xi = ctx.rationals(L, exclude=[x for x in exclude if field.is_exact_value(x)])
    model = chain.ChainModel.create(N, q, xi, ctx.backend)
    ctx.echo.update({"N": N, "L": model.L, "q": field.to_json(model.q),
                     "xi": [field.to_json(x) for x in model.xi]})
    return model


def _params(ctx: Context, model: chain.ChainModel, n) -> bethe.BetheParams:
    given = ctx.get("params")
    if given is not None and given != "solve":
        t = bethe.BetheParams(given, ctx.backend)
    else:
        vals = field.random_rationals(ctx.rng, sum(n), exclude=[x for x in model.xi
                                                               if field.is_exact_value(x)])
        types, pos = [], 0
        for k in n:
            types.append([ctx.scalar(v) for v in vals[pos:pos + k]])
            pos += k
        t = bethe.BetheParams(types, ctx.backend)
    ctx.echo["params"] = [[field.to_json(x) for x in tk] for tk in t.types]
    ctx.echo["n"] = list(t.n)
    return t


def _size(ctx: Context, default_N: int, default_L: int, default_n):
    n = tuple(ctx.get("n", default_n))
    N = int(ctx.get("N", len(n) + 1 if "n" in ctx.cfg else default_N))
    if len(n) != N - 1:
        raise ConfigError(f"n has {len(n)} entries, expected N-1 = {N - 1}")
    L = int(ctx.get("L", len(ctx.cfg["xi"]) if "xi" in ctx.cfg else default_L))
    return N, L, n


def _max_vec(ctx: Context, diff):
    m = field.max_abs(diff)
    return m if ctx.backend == field.EXACT else float(m)


def _rel(ctx: Context, a, b):
    d = _max_vec(ctx, a - b)
    if ctx.backend == field.EXACT:
        return d
    return d / max(float(field.max_abs(a)), 1e-300)


# ---------------------------------------------------------------- tasks

def task_check_rmatrix(ctx: Context) -> None:
    ranks = ctx.get("ranks", [ctx.get("N")] if "N" in ctx.cfg else [2, 3, 4])
    points = int(ctx.get("points", 10))
    ctx.echo.update({"ranks": ranks, "points": points})
    for N in ranks:
        for p in range(points):
            u, v, a, b = ctx.rationals(4)
            q = ctx.q()

            def check(N=N, p=p, u=u, v=v, q=q, a=a, b=b):
                for key, res in rmatrix.r_property_residuals(u, v, q, N).items():
                    ctx.record(f"N={N}/pt{p}/{key}", res)
                for key, res in kernel.prop_fct_residuals(u, v, q, [u, a], [v, b]).items():
                    ctx.record(f"N={N}/pt{p}/{key}", res)

            ctx.guarded(f"rmatrix N={N} pt{p}", check)


def task_check_rtt(ctx: Context) -> None:
    ranks = ctx.get("ranks", [ctx.get("N")] if "N" in ctx.cfg else [2, 3])
    lengths = ctx.get("lengths", [ctx.get("L")] if "L" in ctx.cfg else [1, 2, 3])
    points = int(ctx.get("points", 2))
    ctx.echo.update({"ranks": ranks, "lengths": lengths, "points": points})
    for N in ranks:
        for L in lengths:
            for p in range(points):
                vals = ctx.rationals(L + 2)
                q = ctx.q()

                def check(N=N, L=L, p=p, vals=vals, q=q):
                    model = chain.ChainModel.create(N, q, vals[2:], ctx.backend)
                    ctx.record(f"N={N}/L={L}/pt{p}/rtt", chain.rtt_residual(model, vals[0], vals[1]))

                ctx.guarded(f"rtt N={N} L={L} pt{p}", check)


def task_check_identities(ctx: Context) -> None:
    sizes = ctx.get("sizes", [1, 2, 3, 4])
    points = int(ctx.get("points", 10))
    ctx.echo.update({"sizes": sizes, "points": points})
    for n in sizes:
        for p in range(points):
            vals = ctx.rationals(2 * n)
            q = ctx.q()

            def check(n=n, p=p, vals=vals, q=q):
                ys, xs = vals[:n], vals[n:]
                ctx.record(f"n={n}/pt{p}/ident1", kernel.ident_residual(1, ys, xs, q))
                ctx.record(f"n={n}/pt{p}/ident2", kernel.ident_residual(2, ys, xs, q))
                for key, res in kernel.prop_fct_residuals(vals[0], vals[-1], q, ys, xs).items():
                    ctx.record(f"n={n}/pt{p}/{key}", res)

            ctx.guarded(f"identities n={n} pt{p}", check)


def task_compare_bv(ctx: Context) -> None:
    N, L, n = _size(ctx, 3, 3, (2, 1))
    model = _model(ctx, N, L)
    t = _params(ctx, model, n)
    q = model.q

    def bv1():
        B, Bh = bethe.bv_right(model, "B", t), bethe.bv_right(model, "Bhat", t)
        ctx.record("BV1: B|0> = Bhat|0>", _rel(ctx, B, Bh))

    def duals():
        C, Ch = bethe.bv_left(model, "C", t), bethe.bv_left(model, "Chat", t)
        ctx.record("duals: <0|C = <0|Chat", _rel(ctx, C, Ch))

    def oracle(variant):
        def run():
            part = bethe.PREBV[variant](t, q)
            orc = bethe.oracle_perm(variant, t, q)
            ctx.counts[f"{variant} words"] = len(part)
            if ctx.backend == field.EXACT:
                ctx.record(f"oracle {variant}", words.canonicalize(orc) == part)
            else:
                diff = words.canonicalize(orc - part)
                ctx.record(f"oracle {variant}", float(words.max_coefficient(diff)),
                           ctx.tol * max(1.0, float(words.max_coefficient(part))))
        return run

    ctx.guarded("BV1", bv1)
    ctx.guarded("duals", duals)
    if sum(n) <= bethe.ORACLE_GUARD:
        ctx.guarded("oracle B", oracle("B"))
        ctx.guarded("oracle Bhat", oracle("Bhat"))
    if N == 3:
        us, vs = t[1], t[2]
        pairs = {"right-1": ("right", "B"), "right-2": ("right", "Bhat"),
                 "left-1": ("left", "C"), "left-2": ("left", "Chat")}
        for side, (where, variant) in pairs.items():
            def gl3(side=side, where=where, variant=variant):
                ref = (bethe.bv_right if where == "right" else bethe.bv_left)(model, variant, t)
                ctx.record(f"gl3 {side}", _rel(ctx, ref, bethe.gl3_explicit(model, us, vs, side)))
            ctx.guarded(f"gl3 {side}", gl3)


def task_check_morphisms(ctx: Context) -> None:
    N, L, n = _size(ctx, 3, 2, (1, 1))
    model = _model(ctx, N, L)
    t = _params(ctx, model, n)
    q = model.q
    inv = model.with_q(1 / q)

    def phi():
        lhs = words.apply_phi(bethe.prebv_Bhat(t, q))
        rhs = bethe.prebv_B(bethe.omega_reverse(t), 1 / q)
        ctx.record("phi(Bhat_q) = B_{1/q}(omega t)", words.sums_equal(lhs, rhs, inv, ctx.tol))

    def psi(src, dst):
        def run():
            lhs = words.apply_psi(bethe.PREBV[src](t, q))
            rhs = bethe.PREBV[dst](t.inverse(), 1 / q)
            ctx.record(f"psi({src}_q) = {dst}_(1/q)(1/t)", words.sums_equal(lhs, rhs, inv, ctx.tol))
        return run

    ctx.guarded("phi-act", phi)
    ctx.guarded("psi-act B", psi("B", "C"))
    ctx.guarded("psi-act Bhat", psi("Bhat", "Chat"))


def _solve(ctx: Context, model, n) -> bethe.BetheParams:
    if ctx.get("params", "solve") != "solve":
        return _params(ctx, model, n)
    if ctx.backend != field.FLOAT:
        raise ConfigError("solving the Bethe equations needs the float backend")
    guesses = ctx.get("guesses")
    if guesses is None:
        guesses = onshell.random_guesses(ctx.rng, n, int(ctx.get("starts", 40)))
    sol = onshell.solve_bethe(model, n, guesses, max_iter=int(ctx.get("max_iter", 100)))
    ctx.counts["newton iterations"] = sol.iterations
    ctx.counts["accepted guess"] = sol.guess_index
    ctx.echo["params"] = [[field.to_json(x) for x in tk] for tk in sol.params.types]
    ctx.echo["n"] = list(n)
    return sol.params


def task_onshell(ctx: Context) -> None:
    N, L, n = _size(ctx, 2, 1, (1,))
    model = _model(ctx, N, L)
    t = _solve(ctx, model, n)
    ctx.record("bethe equations", max((abs(r) for r in onshell.bethe_residual(model, t)),
                                      default=0 if ctx.backend == field.EXACT else 0.0),
               None if ctx.backend == field.EXACT else 1e-12)
    zs = ctx.get("z")
    zs = [ctx.scalar(z) for z in zs] if zs else ctx.rationals(3, exclude=[
        x for x in list(model.xi) + [y for tk in t.types for y in tk] if field.is_exact_value(x)])
    B = bethe.bv_right(model, "B", t)
    C = bethe.bv_left(model, "C", t)
    for k, z in enumerate(zs):
        def eig(k=k, z=z):
            ctx.record(f"z{k} right", onshell.eigen_residual_right(model, t, z, vector=B))
            ctx.record(f"z{k} left", onshell.eigen_residual_left(model, t, z, vector=C))
            if ctx.backend == field.FLOAT and model.dim <= 1024:
                ev = np.linalg.eigvals(chain.TransferMatrix(model, z).dense())
                ta = complex(onshell.tau(model, z, t))
                ctx.record(f"z{k} tau in spectrum", float(np.min(np.abs(ev - ta)) / max(abs(ta), 1e-300)))
        ctx.guarded(f"eigen z{k}", eig)


def task_bench(ctx: Context) -> None:
    N, L, n = _size(ctx, 4, 4, (2, 2, 2))
    ctx.backend = ctx.cfg.get("backend", field.FLOAT)
    model = _model(ctx, N, L)
    t = _params(ctx, model, n)
    oracle = partitions.total_terms(n)
    start = time.perf_counter()
    B = bethe.prebv_B(t, model.q)
    ctx.timings["build prebv_B"] = time.perf_counter() - start
    ctx.counts.update({"partition terms": B.source_terms, "multinomial oracle": oracle,
                       "canonical words": len(B),
                       "permissible matrices": len(partitions.enumerate_upper(n))})
    ctx.record("term count = multinomial oracle", B.source_terms == oracle)
    previous = jit_enabled()
    modes = [("numpy", False)] + ([("numba", True)] if ctx.backend == field.FLOAT else [])
    vecs = {}
    try:
        for label, flag in modes:
            try:
                set_jit(flag)
            except RuntimeError:
                continue
            chain.evaluate_word(model, B)  # warm-up (jit compile, caches)
            start = time.perf_counter()
            vecs[label] = chain.evaluate_word(model, B)
            ctx.timings[f"evaluate ({label})"] = time.perf_counter() - start
    finally:
        set_jit(previous)
    if len(vecs) == 2:
        ctx.record("numba = numpy", _rel(ctx, vecs["numpy"], vecs["numba"]), 1e-12)


RUNNERS = {
    "check-rmatrix": task_check_rmatrix,
    "check-rtt": task_check_rtt,
    "check-identities": task_check_identities,
    "compare-bv": task_compare_bv,
    "check-morphisms": task_check_morphisms,
    "onshell": task_onshell,
    "bench": task_bench,
}


def run(task: str, cfg: dict) -> dict:
    if task not in RUNNERS:
        raise ConfigError(f"unknown task {task!r}; choose from {', '.join(TASKS)}")
    ctx = Context(task, cfg)
    start = time.perf_counter()
    try:
        RUNNERS[task](ctx)
    except ConfigError:
        raise
    except (BetheLabError, ArithmeticError, ValueError) as exc:
        ctx.checks.append({"name": "setup", "passed": False,
                           "error": f"{type(exc).__name__}: {exc}"})
    ctx.timings["total"] = time.perf_counter() - start
    return ctx.report()


def load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError("config must be a JSON object")
    return cfg


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="bethelab", description=__doc__.splitlines()[0])
    p.add_argument("task", choices=TASKS)
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--out", help="write the JSON report here (default: stdout)")
    p.add_argument("--seed", type=int, help="override the config seed")
    p.add_argument("--backend", choices=field.BACKENDS, help="override the config backend")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(f"bethelab: {exc}", file=sys.stderr)
        return 2
    if args.seed is not None:
        cfg["seed"] = args.seed
    if args.backend is not None:
        cfg["backend"] = args.backend
    try:
        report = run(args.task, cfg)
    except ConfigError as exc:
        print(f"bethelab: {exc}", file=sys.stderr)
        return 2
    text = json.dumps(report, indent=2)
    out = args.out or cfg.get("output")
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return 0 if report["passed"] else 1


if __name__ == "__main__":
    sys.exit(main())
