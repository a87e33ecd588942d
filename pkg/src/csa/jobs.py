"""Declarative jobs: a tower, a graph of named algebras, and a list of tasks.

Every task produces a JSON-serializable report with a "pass" flag.  Reports
depend only on the job (and its seed), never on timing, so repeated runs
are byte-identical.
"""
from __future__ import annotations

import json
import os
import random
from dataclasses import dataclass, field

from .algebra import (
    Algebra,
    AlgebraElement,
    TensorAlgebra,
    algebra_from_description,
    matrix_algebra,
    matrix_element,
    verify_isomorphism,
)
from .armature import Armature, decompose_by_armature, symplectic_base, verify_armature
from .errors import CSAError, ParseError, TaskError
from .fields import build_tower
from .symbols import (
    KummerField,
    cyclic_algebra,
    kum_group,
    kummer_extension,
    kummer_pairing,
    separability_idempotent,
    standard_armature,
    symbol_algebra,
)

SCHEMA_VERSION = 1
DEFAULT_SEED = 20240601


def job_seed(job: dict) -> int:
    env = os.environ.get("CSA_SEED")
    if env:
        return int(env)
    return int(job.get("seed", DEFAULT_SEED))


# ---------------------------------------------------------------------------
# parsing

@dataclass
class Job:
    tower: object
    nodes: dict
    tasks: list
    seed: int
    raw: dict = field(repr=False, default=None)
    algebras: dict = field(default_factory=dict)
    kummers: dict = field(default_factory=dict)


def load_job(path) -> Job:
    with open(path) as fh:
        text = fh.read()
    return parse_job(text)


def parse_job(text: str) -> Job:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg} (line {exc.lineno}, column {exc.colno})", position=exc.pos)
    if not isinstance(raw, dict):
        raise ParseError("job must be a JSON object", position="$")
    try:
        tower = build_tower(raw.get("tower", {"base": "Q"}))
    except (CSAError, ValueError) as exc:
        raise ParseError(f"bad tower: {exc}", position="$.tower")
    nodes = raw.get("algebras", {})
    if not isinstance(nodes, dict):
        raise ParseError("algebras must be an object", position="$.algebras")
    tasks = raw.get("tasks", [])
    if not isinstance(tasks, list):
        raise ParseError("tasks must be a list", position="$.tasks")
    job = Job(tower, nodes, tasks, job_seed(raw), raw)
    _check_references(job)
    for name in nodes:
        resolve(job, name)
    return job


def _refs(node):
    if "tensor" in node:
        return list(node["tensor"])
    if "cyclic" in node:
        return [node["cyclic"]["kummer"]]
    return []


def _check_references(job: Job):
    state = {}

    def visit(name, path):
        if name not in job.nodes:
            raise ParseError(f"dangling reference {name!r}", position=path)
        s = state.get(name)
        if s == 1:
            raise ParseError(f"cyclic reference through {name!r}", position=path)
        if s == 2:
            return
        state[name] = 1
        node = job.nodes[name]
        if not isinstance(node, dict):
            raise ParseError("algebra node must be an object", position=f"$.algebras.{name}")
        for k, ref in enumerate(_refs(node)):
            visit(ref, f"$.algebras.{name}[{k}]")
        state[name] = 2

    for name in job.nodes:
        visit(name, f"$.algebras.{name}")
    for k, task in enumerate(job.tasks):
        for key in ("algebra", "kummer"):
            if key in task and task[key] not in job.nodes:
                raise ParseError(f"dangling reference {task[key]!r}", position=f"$.tasks[{k}].{key}")


def resolve(job: Job, name: str):
    """Build (and cache) the algebra or Kummer field of a node."""
    if name in job.algebras:
        return job.algebras[name]
    T = job.tower
    node = job.nodes[name]
    try:
        if "symbol" in node:
            s = node["symbol"]
            obj = symbol_algebra(T, T.parse(str(s["a"])), T.parse(str(s["b"])), int(s.get("n", 2)), name=name)
        elif "tensor" in node:
            obj = TensorAlgebra([resolve(job, r) for r in node["tensor"]], name=name)
        elif "matrix" in node:
            obj = matrix_algebra(T, int(node["matrix"]), name=name)
        elif "kummer" in node:
            k = node["kummer"]
            obj = kummer_extension(T, [T.parse(str(b)) for b in k["radicands"]], k["degrees"], k.get("names"))
            job.kummers[name] = obj
        elif "cyclic" in node:
            c = node["cyclic"]
            k = resolve(job, c["kummer"])
            obj, _ = cyclic_algebra(k, T.parse(str(c["a"])), name=name)
        elif "dim" in node:
            obj = algebra_from_description(T, node, name=name)
        else:
            raise ParseError(f"unknown algebra node kind in {name!r}", position=f"$.algebras.{name}")
    except ParseError:
        raise
    except (CSAError, ValueError, KeyError, TypeError) as exc:
        raise ParseError(f"cannot build {name!r}: {type(exc).__name__}: {exc}", position=f"$.algebras.{name}")
    if "index" in node and isinstance(obj, Algebra):
        obj.meta["index"] = int(node["index"])
    job.algebras[name] = obj
    return obj


def algebra_of(job: Job, name: str) -> Algebra:
    obj = resolve(job, name)
    return obj.algebra if isinstance(obj, KummerField) else obj


def parse_element(job: Job, A: Algebra, spec) -> AlgebraElement:
    """{"coords": {idx: s}} | {"diag": [...]} | {"matrix": [[...]]} | {"embed": [k, spec]}
    | {"product": [spec, ...]} | {"sum": [spec, ...]} | {"scale": [s, spec]} | {"basis": label}."""
    T = job.tower
    if "coords" in spec:
        return A.elem({int(k): T.parse(str(v)) for k, v in spec["coords"].items()})
    if "basis" in spec:
        lab = spec["basis"]
        if isinstance(lab, int):
            return A.basis(lab)
        return A.basis(A.labels.index(lab))
    if "diag" in spec:
        n = A.meta["matrix_size"]
        return A.elem({i * n + i: T.parse(str(v)) for i, v in enumerate(spec["diag"])})
    if "matrix" in spec:
        return matrix_element(A, [[T.parse(str(v)) for v in row] for row in spec["matrix"]])
    if "embed" in spec:
        k, sub = spec["embed"]
        return A.embed(int(k), parse_element(job, A.factors[int(k)], sub))
    if "product" in spec:
        acc = A.one()
        for s in spec["product"]:
            acc = acc * parse_element(job, A, s)
        return acc
    if "sum" in spec:
        acc = A.zero()
        for s in spec["sum"]:
            acc = acc + parse_element(job, A, s)
        return acc
    if "scale" in spec:
        c, sub = spec["scale"]
        return parse_element(job, A, sub) * T.parse(str(c))
    raise ParseError(f"unknown element spec {spec!r}")


def parse_armature(job: Job, A: Algebra, spec) -> Armature:
    if spec in (None, "standard"):
        return standard_armature(A)
    gens = [parse_element(job, A, g) for g in spec["generators"]]
    return Armature(A, gens, spec["orders"], name=spec.get("name"))


# ---------------------------------------------------------------------------
# tasks

def _elem_json(x):
    return x.to_json()


def _armature_json(arm: Armature):
    T = arm.T
    return {
        "order": arm.order,
        "orders": arm.orders,
        "generators": [_elem_json(g) for g in arm.gens],
        "pairing_table": arm.pairing_table(),
    }


def task_armature_verify(job, task):
    A = algebra_of(job, task["algebra"])
    arm = parse_armature(job, A, task.get("armature"))
    rep = verify_armature(A, arm)
    out = {"pass": rep.passed, "verification": rep.to_json(), "armature": _armature_json(arm)}
    if rep.passed:
        out["radical_order"] = len(arm.radical())
    return out


def task_armature_decompose(job, task):
    A = algebra_of(job, task["algebra"])
    arm = parse_armature(job, A, task.get("armature"))
    rep = verify_armature(A, arm)
    if not rep.passed:
        return {"pass": False, "verification": rep.to_json()}
    dec = decompose_by_armature(A, arm)
    T = A.T
    factors = []
    for f in dec.factors:
        s = f.meta["symbol"]
        factors.append({"name": f.name, "degree": s["n"], "a": T.format(s["a"]), "b": T.format(s["b"]),
                        "zeta": T.format(s["zeta"])})
    return {
        "pass": dec.report.passed,
        "verification": rep.to_json(),
        "armature": _armature_json(arm),
        "factors": factors,
        "symplectic_base": dec.base.to_json(T),
        "witness": {"isomorphism": dec.report.to_json(),
                    "generator_images": [[_elem_json(u), _elem_json(v)] for u, v in dec.generator_images]},
    }


def task_symbols_kummer(job, task):
    M = resolve(job, task["kummer"])
    sep = separability_idempotent(M)
    T = M.T
    kum = kum_group(M)
    table = [[T.format(kummer_pairing(M, s, e)) for e in M.group_elements()] for s in M.group_elements()]
    return {
        "pass": all(sep.checks.values()),
        "degree": M.algebra.dim,
        "group_orders": M.degrees,
        "kum_representatives": [M.algebra.labels[M.index(e)] for e in M.group_elements()],
        "kum_order": kum.order,
        "kummer_pairing": table,
        "separability_checks": sep.checks,
    }


def _crossed_setup(job, task):
    from .crossed import build_crossed, skolem_noether_lift

    A = algebra_of(job, task["algebra"])
    M = resolve(job, task["kummer"])
    images = task.get("images")
    if images is not None:
        images = [parse_element(job, A, s) for s in images]
    lift = skolem_noether_lift(A, M, images)
    E = build_crossed(lift, task.get("vars"))
    return A, M, lift, E


def _f_table(E):
    from .crossed import f_exponents

    out = {}
    for s in E.sigmas:
        for t in E.sigmas:
            eps = f_exponents(E.degrees, s, t)
            out[f"{list(s)}|{list(t)}"] = "*".join(v for v, e in zip(E.tvars, eps) if e) or "1"
    return out


def task_crossed_build(job, task):
    from .crossed import f_symmetric, formal_associativity

    A, M, lift, E = _crossed_setup(job, task)
    fa = formal_associativity(E)
    return {
        "pass": all(lift.checks.values()) and fa is None and E.dim == A.dim and f_symmetric(E),
        "dim_E'": E.dim,
        "dim_A": A.dim,
        "dim_C": lift.C.dim,
        "vars": list(E.tvars),
        "lift": lift.to_json(),
        "f_table": _f_table(E),
        "formal_associativity_failure": None if fa is None else [list(x) for x in fa],
    }


def task_crossed_lift(job, task):
    from .crossed import lift_armature

    A, M, lift, E = _crossed_setup(job, task)
    arm = parse_armature(job, A, task.get("armature"))
    res = lift_armature(E, arm)
    return {
        "pass": res.report.passed and res.isometric,
        "verification": res.report.to_json(),
        "sigmas": [list(s) for s in res.sigmas],
        "B_id": [list(e) for e in res.B_id],
        "armature": _armature_json(res.armature),
        "isometric": res.isometric,
    }


def task_crossed_nu(job, task):
    from .crossed import lift_armature, nu_map, same_armature

    A, M, lift, E = _crossed_setup(job, task)
    arm = parse_armature(job, A, task.get("armature"))
    res = lift_armature(E, arm)
    nu = nu_map(E, res.armature)
    same = same_armature(nu.armature, arm)
    return {
        "pass": nu.report.passed and nu.isometric and nu.injective and nu.kum_contained and same,
        "image": _armature_json(nu.armature),
        "isometric": nu.isometric,
        "injective": nu.injective,
        "kum_contained": nu.kum_contained,
        "round_trip": same,
    }


def task_crossed_residue(job, task):
    from .crossed import lift_armature, residue_armature

    A, M, lift, E = _crossed_setup(job, task)
    arm = parse_armature(job, A, task.get("armature"))
    res = lift_armature(E, arm)
    r = residue_armature(E, res.armature)
    return {
        "pass": r.report.passed and r.injective and r.radical_is_kum and r.armature.order == lift.C.dim,
        "order": r.armature.order,
        "dim_C": lift.C.dim,
        "w_prime_image_order": r.w_prime_order,
        "kernel_order": r.kernel_order,
        "radical_is_kum": r.radical_is_kum,
        "verification": r.report.to_json(),
    }


def task_crossed_decompose(job, task):
    from .crossed import decompose_with_subfields

    A, M, lift, E = _crossed_setup(job, task)
    arm = parse_armature(job, A, task.get("armature"))
    dec = decompose_with_subfields(E, arm)
    T = A.T
    return {
        "pass": dec.report.passed and (dec.eprime_report is None or dec.eprime_report.passed),
        "symplectic_base": [[list(e), list(f)] for e, f in dec.pairs],
        "deltas": [T.format(d) for d in dec.deltas],
        "factors": [f.name for f in dec.factors],
        "witness": dec.report.to_json(),
        "eprime_parameters": dec.eprime_parameters,
        "eprime_witness": None if dec.eprime_report is None else dec.eprime_report.to_json(),
    }


def task_crossed_brauer(job, task):
    from .crossed import brauer_witness_smallscale

    A, M, lift, E = _crossed_setup(job, task)
    w = brauer_witness_smallscale(E)
    return w.to_json()


def task_crossed_properties(job, task):
    from .crossed import leading_component_unique, leading_term, valuation_w

    A, M, lift, E = _crossed_setup(job, task)
    rng = random.Random(job.seed)
    n = int(task.get("samples", 100))
    mult = tri = uniq = 0
    for _ in range(n):
        s, u = E.random_element(rng), E.random_element(rng)
        if not s or not u:
            continue
        mult += valuation_w(E, s * u) == valuation_w(E, s) + valuation_w(E, u)
        if s + u:
            tri += not (valuation_w(E, s + u) < min(valuation_w(E, s), valuation_w(E, u)))
        else:
            tri += 1
        uniq += leading_component_unique(E, s)
    return {"pass": mult == tri == uniq == n, "samples": n, "multiplicative": mult,
            "ultrametric": tri, "unique_leading": uniq, "seed": job.seed}


def task_sqcentral_analyze(job, task):
    from .sqcentral import analyze

    A = algebra_of(job, task["algebra"])
    g = parse_element(job, A, task["element"])
    rep = analyze(A, g, int(task.get("budget", 20000)), task.get("index"))
    out = rep.to_json()
    out["pass"] = True
    return out


TASKS = {
    "armature.verify": task_armature_verify,
    "armature.decompose": task_armature_decompose,
    "symbols.kummer": task_symbols_kummer,
    "crossed.build": task_crossed_build,
    "crossed.lift": task_crossed_lift,
    "crossed.nu": task_crossed_nu,
    "crossed.residue": task_crossed_residue,
    "crossed.decompose": task_crossed_decompose,
    "crossed.brauer": task_crossed_brauer,
    "crossed.properties": task_crossed_properties,
    "sqcentral.analyze": task_sqcentral_analyze,
}


def run_task(job: Job, task: dict, index: int = 0) -> dict:
    kind = task.get("type")
    fn = TASKS.get(kind)
    tid = task.get("id", f"task{index}")
    if fn is None:
        raise ParseError(f"unknown task type {kind!r}", position=f"$.tasks[{index}].type")
    try:
        body = fn(job, task)
    except ParseError:
        raise
    except (CSAError, ValueError, KeyError, AssertionError) as exc:
        body = {"pass": False, "error": f"{type(exc).__name__}: {exc}"}
    report = {"schema_version": SCHEMA_VERSION, "id": tid, "type": kind}
    report.update(body)
    return report


def _summary(job: Job, reports) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "seed": job.seed,
        "pass": all(r.get("pass") for r in reports),
        "tasks": reports,
    }


def run_job_data(job: Job, stop_on_failure: bool = False) -> dict:
    reports = []
    for k, t in enumerate(job.tasks):
        reports.append(run_task(job, t, k))
        if stop_on_failure and not reports[-1].get("pass"):
            break
    return _summary(job, reports)


def dumps(report) -> str:
    return json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_reports(summary: dict, outdir) -> None:
    os.makedirs(outdir, exist_ok=True)
    for r in summary["tasks"]:
        with open(os.path.join(outdir, f"{r['id']}.json"), "w") as fh:
            fh.write(dumps(r))
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        fh.write(dumps(summary))


def run_job(path, outdir=None):
    """Run a job file and return (exit code, summary).

    Tasks run in order.  The first failing task stops the run with TaskError;
    reports written so far (including the failing one) are kept in outdir.
    """
    job = load_job(path)
    summary = run_job_data(job, stop_on_failure=True)
    if outdir:
        write_reports(summary, outdir)
    failing = [r for r in summary["tasks"] if not r.get("pass")]
    if failing:
        err = TaskError(f"task {failing[0]['id']!r} failed")
        err.summary = summary
        err.task = failing[0]
        raise err
    return 0, summary


# ---------------------------------------------------------------------------
# re-validation from serialized witnesses

def revalidate(job: Job, report: dict) -> bool:
    """Re-check a task report against its job using only the serialized witness."""
    kind = report.get("type")
    task = next((t for k, t in enumerate(job.tasks) if t.get("id", f"task{k}") == report.get("id")), None)
    if task is None:
        raise TaskError(f"report {report.get('id')!r} has no task in the job")
    if not report.get("pass"):
        return False
    if kind == "armature.decompose":
        from .symbols import symbol_algebra as sym

        A = algebra_of(job, task["algebra"])
        T = job.tower
        gens = [(A.elem({int(k): T.parse(v) for k, v in u.items()}), A.elem({int(k): T.parse(v) for k, v in w.items()}))
                for u, w in report["witness"]["generator_images"]]
        factors = [sym(T, T.parse(f["a"]), T.parse(f["b"]), f["degree"], zeta=T.parse(f["zeta"]))
                   for f in report["factors"]]
        tensor = factors[0] if len(factors) == 1 else TensorAlgebra(factors)
        pw = []
        for (u, w), f in zip(gens, report["factors"]):
            n = f["degree"]
            pw.append([(u ** a) * (w ** b) for a in range(n) for b in range(n)])

        def img(idx):
            parts = tensor.split(idx) if len(factors) > 1 else (idx,)
            acc = A.one()
            for k, p_ in enumerate(parts):
                acc = acc * pw[k][p_]
            return acc

        return verify_isomorphism(tensor, A, img).passed
    if kind == "sqcentral.analyze":
        from .sqcentral import verify_quaternion_witness

        A = algebra_of(job, task["algebra"])
        g = parse_element(job, A, task["element"])
        if report.get("witness") is None:
            fresh = run_task(job, task)
            return fresh == report
        T = job.tower
        f = A.elem({int(k): T.parse(v) for k, v in report["witness"].items()})
        return verify_quaternion_witness(g, f)
    fresh = run_task(job, task)
    return fresh == report
