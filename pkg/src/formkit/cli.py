"""The formkit command line: verify, derive, classify, check-theorems,
enumerate, instance, search, replay.

Reports are JSON on stdout (or text with --format text), deterministic for
identical inputs: stable ordering, no timestamps in the payload. Wall time
goes to stderr. Exit codes: 0 all requested checks pass, 1 check failures
(witnesses in the report), 2 usage or malformed input.

Failing checks embed a witness object that replays that single check in
isolation: save it to a file and run `formkit replay <witness.json>`.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass, field
from typing import Optional

import click

from . import __version__
from .forms import FormInstance
from .groups import (
    build_grp_form,
    normal_interval_order,
    normal_subgroup_masks,
    preserves_normals,
    standard_corpus,
    subgroup_masks,
)
from .jsonio import (
    SchemaError,
    dump_json,
    form_from_dict,
    form_to_dict,
    group_from_dict,
    lattice_from_dict,
    load_json,
    operator_from_dict,
    operator_to_dict,
    order_from_dict,
    order_to_dict,
    partition_to_dict,
    topology_to_dict,
)
from .lattice import bits
from .morphisms import (
    DISPUTED_CHECKS,
    classify_morphism,
    cohereditary_operator_check,
    final_thick_check,
    is_final,
    is_strict,
    strict_characterization,
    strict_via_operators,
    transfer_laws_check,
)
from .partitions import build_quot_form, enumerate_partitions
from .report import Report
from .search import CLAIMS, run_case, run_search
from .topogenous import (
    TopogenousOrder,
    check_T3_pull_form,
    classify_order,
    closure_from_order,
    interior_from_order,
    leq_order,
    order_from_closure,
    order_from_interior,
    roundtrip_check,
    verify_closure,
    verify_interior,
    verify_order,
)
from .topologies import (
    b_order,
    b_relation,
    build_top_form,
    enumerate_topologies,
    is_clopen_map,
    theta_order,
    theta_relation,
)

WITNESS_SCHEMA = 1


# -- run report ------------------------------------------------------------------


@dataclass
class CheckResult:
    name: str
    status: str  # pass | fail | reported | skipped
    checks_run: int = 0
    violations: list[dict] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    data: Optional[dict] = None
    witness: Optional[dict] = None

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "status": self.status,
            "checks_run": self.checks_run,
            "violations": self.violations,
            "notes": self.notes,
        }
        if self.data is not None:
            out["data"] = self.data
        if self.witness is not None:
            out["witness"] = self.witness
        return out


@dataclass
class RunReport:
    command: list[str]
    inputs: dict[str, str] = field(default_factory=dict)
    checks: list[CheckResult] = field(default_factory=list)
    payload: Optional[dict] = None

    @property
    def ok(self) -> bool:
        return all(c.status != "fail" for c in self.checks)

    def to_dict(self) -> dict:
        out = {
            "command": self.command,
            "version": __version__,
            "inputs": dict(sorted(self.inputs.items())),
            "checks": [c.to_dict() for c in self.checks],
            "ok": self.ok,
        }
        if self.payload is not None:
            out["payload"] = self.payload
        return out

    def render_text(self) -> str:
        lines = [f"formkit {__version__}: {' '.join(self.command)}"]
        for path, digest in sorted(self.inputs.items()):
            lines.append(f"input {path} {digest}")
        for c in self.checks:
            lines.append(f"[{c.status.upper():8s}] {c.name} ({c.checks_run} checks)")
            for v in c.violations[:5]:
                lines.append(f"    witness: {v}")
            if len(c.violations) > 5:
                lines.append(f"    ... {len(c.violations) - 5} more")
            for n in c.notes:
                lines.append(f"    note: {n}")
        lines.append("OK" if self.ok else "FAIL")
        return "\n".join(lines)


def check_from_report(
    name: str,
    rep: Report,
    witness: Optional[dict] = None,
    reported_only: bool = False,
    data: Optional[dict] = None,
) -> CheckResult:
    status = "pass" if rep.ok else ("reported" if reported_only else "fail")
    return CheckResult(
        name=name,
        status=status,
        checks_run=rep.checks_run,
        violations=[v.to_dict() for v in sorted(rep.violations, key=lambda v: (v.check, v.where, str(v.witness)))],
        notes=list(rep.notes),
        data=data,
        witness=witness if not rep.ok else None,
    )


def emit(ctx: click.Context, report: RunReport, started: float) -> None:
    fmt = ctx.obj["format"]
    if fmt == "json":
        click.echo(json.dumps(report.to_dict(), indent=2, sort_keys=True))
    else:
        click.echo(report.render_text())
    click.echo(f"elapsed: {time.monotonic() - started:.3f}s", err=True)
    ctx.exit(0 if report.ok else 1)


def digest_file(path: str) -> str:
    with open(path, "rb") as fh:
        return "sha256:" + hashlib.sha256(fh.read()).hexdigest()


def fail_usage(message: str) -> None:
    raise click.UsageError(message)


# -- input loading -----------------------------------------------------------------


def load_form_file(path: str, report: RunReport) -> FormInstance:
    report.inputs[path] = digest_file(path)
    return form_from_dict(load_json(path), where=path)


def load_order_file(path: str, report: RunReport) -> TopogenousOrder:
    report.inputs[path] = digest_file(path)
    return order_from_dict(load_json(path), where=path)


NAMED_ORDERS = ("leq", "theta", "b", "normal-interval")


@dataclass
class InstanceBundle:
    kind: str
    recipe: dict
    form: FormInstance
    bundle: object  # TopForm | SubgroupForm | PartitionForm | None

    def named_order(self, name: str) -> TopogenousOrder:
        from .groups import SubgroupForm
        from .topologies import TopForm

        if name == "leq":
            return leq_order(self.form)
        if name == "theta" and isinstance(self.bundle, TopForm):
            return theta_order(self.bundle)
        if name == "b" and isinstance(self.bundle, TopForm):
            return b_order(self.bundle)
        if name == "normal-interval" and isinstance(self.bundle, SubgroupForm):
            return normal_interval_order(self.bundle)
        fail_usage(f"order {name!r} is not defined for instance kind {self.kind!r}")


def parse_sizes(text: str) -> list[int]:
    try:
        return [int(s) for s in text.split(",") if s != ""]
    except ValueError:
        fail_usage(f"--sizes expects comma-separated integers, got {text!r}")


def build_instance(kind: str, sizes: Optional[str], corpus: str, max_order: int) -> InstanceBundle:
    if kind == "top":
        ns = parse_sizes(sizes or "2")
        b = build_top_form(ns)
        return InstanceBundle("top", {"kind": "top", "sizes": ns}, b.form, b)
    if kind == "grp":
        if corpus != "standard":
            fail_usage(f"unknown corpus {corpus!r}; only 'standard' is built in")
        b = build_grp_form(standard_corpus(max_order))
        return InstanceBundle(
            "grp", {"kind": "grp", "corpus": corpus, "max_order": max_order}, b.form, b
        )
    if kind == "quot":
        ns = parse_sizes(sizes or "2")
        b = build_quot_form(ns)
        return InstanceBundle("quot", {"kind": "quot", "sizes": ns}, b.form, b)
    fail_usage(f"unknown instance kind {kind!r}")


def resolve_form_order(
    report: RunReport,
    form_path: Optional[str],
    order_path: Optional[str],
    instance: Optional[str],
    sizes: Optional[str],
    corpus: str,
    max_order: int,
    order_name: Optional[str],
) -> tuple[FormInstance, TopogenousOrder, dict]:
    """The two ways checks get their inputs: files, or an instance recipe
    with a named order."""
    if instance is not None:
        bundle = build_instance(instance, sizes, corpus, max_order)
        name = order_name or "leq"
        if order_path is not None:
            order = load_order_file(order_path, report)
            recipe = dict(bundle.recipe, order_file=order_path)
        else:
            order = bundle.named_order(name)
            recipe = dict(bundle.recipe, order=name)
        return bundle.form, order, recipe
    if form_path is None:
        fail_usage("provide --form FILE (with --order FILE) or --instance KIND")
    form = load_form_file(form_path, report)
    if order_path is None:
        if order_name == "leq" or order_name is None:
            return form, leq_order(form), {"form_file": form_path, "order": "leq"}
        fail_usage("named orders other than 'leq' need --instance; otherwise pass --order FILE")
    order = load_order_file(order_path, report)
    return form, order, {"form_file": form_path, "order_file": order_path}


# -- witnesses ----------------------------------------------------------------------


def make_witness(check: str, recipe: dict, **extra) -> dict:
    w = {"schema": WITNESS_SCHEMA, "check": check, "recipe": recipe}
    w.update({k: v for k, v in extra.items() if v is not None})
    return w


def witness_inline(check: str, form: FormInstance, order: Optional[TopogenousOrder] = None, **extra) -> dict:
    recipe = {"kind": "inline", "form": form_to_dict(form)}
    if order is not None:
        recipe["order"] = order_to_dict(order)
    return make_witness(check, recipe, **extra)


# -- the theorem battery -------------------------------------------------------------


def theorem_checks(
    form: FormInstance,
    order: TopogenousOrder,
    recipe: dict,
    bundle: Optional[InstanceBundle],
    selected: tuple[str, ...],
) -> list[CheckResult]:
    out: list[CheckResult] = []

    def wanted(name: str) -> bool:
        return not selected or name in selected

    axioms = verify_order(form, order)
    if wanted("order-axioms") or not axioms.ok:
        out.append(check_from_report("order-axioms", axioms, make_witness("order-axioms", recipe)))
    if not axioms.ok:
        return out
    cls = classify_order(form, order)
    if wanted("order-class"):
        out.append(
            CheckResult("order-class", "pass", checks_run=1, data=cls.to_dict())
        )

    if wanted("t3-pull-agreement"):
        out.append(
            check_from_report(
                "t3-pull-agreement",
                check_T3_pull_form(form, order),
                make_witness("t3-pull-agreement", recipe),
            )
        )

    if wanted("strict-iff-push"):
        rep = Report()
        for f in form.base.morphisms():
            one = strict_characterization(form, order, f)
            rep.checks_run += one.checks_run
            rep.violations.extend(one.violations)
        out.append(
            check_from_report("strict-iff-push", rep, make_witness("strict-iff-push", recipe))
        )

    if wanted("final-thick"):
        out.append(
            check_from_report(
                "final-thick",
                final_thick_check(form, order, cls=cls),
                make_witness("final-thick", recipe),
            )
        )

    if wanted("strict-via-operators"):
        rep = Report()
        for f in form.base.morphisms():
            one = strict_via_operators(form, order, f, cls=cls)
            rep.checks_run += one.checks_run
            rep.violations.extend(one.violations)
        if not cls.is_TM and not cls.is_TJ:
            out.append(CheckResult("strict-via-operators", "skipped", notes=["order is neither meet- nor join-stable"]))
        else:
            out.append(
                check_from_report(
                    "strict-via-operators", rep, make_witness("strict-via-operators", recipe)
                )
            )

    if wanted("transfer-laws"):
        rep = transfer_laws_check(form, order)
        gating = Report()
        gating.checks_run = rep.checks_run
        disputed = Report()
        disputed.checks_run = rep.checks_run
        for v in rep.violations:
            (disputed if v.check in DISPUTED_CHECKS else gating).violations.append(v)
        out.append(
            check_from_report("transfer-laws", gating, make_witness("transfer-laws", recipe))
        )
        out.append(
            check_from_report(
                "transfer-laws-disputed-clauses",
                disputed,
                make_witness("transfer-laws-disputed-clauses", recipe),
                reported_only=True,
            )
        )

    if wanted("cohereditary-operator"):
        if cls.is_TM:
            out.append(
                check_from_report(
                    "cohereditary-operator",
                    cohereditary_operator_check(form, order, cls=cls),
                    make_witness("cohereditary-operator", recipe),
                )
            )
        else:
            out.append(CheckResult("cohereditary-operator", "skipped", notes=["order is not meet-stable"]))

    if wanted("roundtrip"):
        if cls.is_TM or cls.is_TJ:
            out.append(
                check_from_report("roundtrip", roundtrip_check(form, order), make_witness("roundtrip", recipe))
            )
        else:
            out.append(CheckResult("roundtrip", "skipped", notes=["order is neither meet- nor join-stable"]))

    out.extend(instance_checks(form, order, recipe, bundle, selected))
    return out


def instance_checks(
    form: FormInstance,
    order: TopogenousOrder,
    recipe: dict,
    bundle: Optional[InstanceBundle],
    selected: tuple[str, ...],
) -> list[CheckResult]:
    """The example propositions, checked as stated on the built instances."""
    from .groups import SubgroupForm
    from .topologies import TopForm

    def wanted(name: str) -> bool:
        return not selected or name in selected

    out: list[CheckResult] = []
    if bundle is None:
        return out
    b = bundle.bundle
    if isinstance(b, TopForm) and recipe.get("order") == "theta":
        if wanted("theta-surjections-final"):
            rep = Report()
            for f in form.base.morphisms():
                if b.functions[f].is_surjective():
                    rep.count("theta-surjections-final")
                    if not is_final(form, order, f):
                        rep.add("theta-surjections-final", where=f)
            out.append(check_from_report("theta-surjections-final", rep, make_witness("theta-surjections-final", recipe)))
        if wanted("theta-clopen-strict-literal"):
            rep = Report()
            for f in form.base.morphisms():
                fn = b.functions[f]
                if not fn.is_surjective():
                    continue
                x, y = form.base.dom[f], form.base.cod[f]
                if all(
                    is_clopen_map(fn, tx, ty)
                    for tx in b.topologies[x]
                    for ty in b.topologies[y]
                ):
                    rep.count("theta-clopen-strict-literal")
                    if not is_strict(form, order, f):
                        rep.add("theta-clopen-strict-literal", where=f)
            out.append(check_from_report("theta-clopen-strict-literal", rep, make_witness("theta-clopen-strict-literal", recipe)))
        if wanted("theta-clopen-strict-per-pair"):
            # The weaker reading: restrict the strictness implication to
            # fibre pairs the map is clopen for. Reported, not gating.
            rep = Report()
            for f in form.base.morphisms():
                fn = b.functions[f]
                if not fn.is_surjective():
                    continue
                x, y = form.base.dom[f], form.base.cod[f]
                push, pull = form.push_maps[f].table, form.pull_maps[f].table
                rows_x, rows_y = order.rel[x], order.rel[y]
                for ai, tx in enumerate(b.topologies[x]):
                    for bi, ty in enumerate(b.topologies[y]):
                        if not is_clopen_map(fn, tx, ty):
                            continue
                        rep.count("theta-clopen-strict-per-pair")
                        if (rows_x[ai] >> pull[bi]) & 1 and not (rows_y[push[ai]] >> bi) & 1:
                            rep.add("theta-clopen-strict-per-pair", where=f, witness=(ai, bi))
            out.append(
                check_from_report(
                    "theta-clopen-strict-per-pair",
                    rep,
                    make_witness("theta-clopen-strict-per-pair", recipe),
                    reported_only=True,
                )
            )
    if isinstance(b, TopForm) and recipe.get("order") == "b":
        if wanted("b-all-strict"):
            rep = Report()
            for f in form.base.morphisms():
                rep.count("b-all-strict")
                if not is_strict(form, order, f):
                    rep.add("b-all-strict", where=f)
            out.append(check_from_report("b-all-strict", rep, make_witness("b-all-strict", recipe)))
        if wanted("b-all-final"):
            rep = Report()
            for f in form.base.morphisms():
                rep.count("b-all-final")
                if not is_final(form, order, f):
                    rep.add("b-all-final", where=f)
            out.append(check_from_report("b-all-final", rep, make_witness("b-all-final", recipe)))
    if isinstance(b, SubgroupForm) and recipe.get("order") == "normal-interval":
        if wanted("strict-iff-preserves-normals"):
            rep = Report()
            for f in form.base.morphisms():
                rep.count("strict-iff-preserves-normals")
                if is_strict(form, order, f) != preserves_normals(b.homs[f]):
                    rep.add("strict-iff-preserves-normals", where=f)
            out.append(check_from_report("strict-iff-preserves-normals", rep, make_witness("strict-iff-preserves-normals", recipe)))
        if wanted("final-iff-surjective"):
            rep = Report()
            for f in form.base.morphisms():
                rep.count("final-iff-surjective")
                if is_final(form, order, f) != b.homs[f].is_surjective():
                    rep.add("final-iff-surjective", where=f)
            out.append(check_from_report("final-iff-surjective", rep, make_witness("final-iff-surjective", recipe)))
    return out


# -- click wiring ---------------------------------------------------------------------


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
@click.version_option(__version__, prog_name="formkit")
@click.option("--format", "fmt", type=click.Choice(["json", "text"]), default="json", show_default=True)
@click.option("--seed", type=int, default=0, show_default=True, help="seed for randomized subcommands")
@click.option("--jobs", type=int, default=1, show_default=True, help="worker threads for sweep subcommands")
@click.pass_context
def main(ctx: click.Context, fmt: str, seed: int, jobs: int) -> None:
    """Compute with finite forms: fibre lattices, transfer maps, topogenous
    orders, closure/interior operators, and morphism classes."""
    ctx.obj = {"format": fmt, "seed": seed, "jobs": jobs, "started": time.monotonic()}


def run_guarded(fn):
    """SchemaErrors become exit code 2 with a location message."""

    def wrapper(ctx, *args, **kwargs):
        try:
            return fn(ctx, *args, **kwargs)
        except SchemaError as exc:
            raise click.UsageError(str(exc)) from exc

    wrapper.__name__ = fn.__name__
    wrapper.__doc__ = fn.__doc__
    return wrapper


@main.group()
def verify() -> None:
    """Verify a lattice, form, order, or operator against its axioms."""


@verify.command("lattice")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def verify_lattice_cmd(ctx: click.Context, path: str) -> None:
    report = RunReport(command=["verify", "lattice", path])
    report.inputs[path] = digest_file(path)
    lat = lattice_from_dict(load_json(path), where=path)
    rep = lat.verify()
    witness = make_witness("lattice", {"kind": "lattice-file", "file": path})
    report.checks.append(check_from_report("lattice-axioms", rep, witness))
    emit(ctx, report, ctx.obj["started"])


@verify.command("form")
@click.option("--file", "path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def verify_form_cmd(ctx: click.Context, path: str) -> None:
    report = RunReport(command=["verify", "form", path])
    form = load_form_file(path, report)
    base_rep = form.base.verify()
    report.checks.append(
        check_from_report("base-category", base_rep, witness_inline("base-category", form))
    )
    laws = form.verify_laws()
    report.checks.append(check_from_report("form-laws", laws, witness_inline("form-laws", form)))
    lifting = form.verify_lifting_iso_laws()
    report.checks.append(
        check_from_report("lifting-iso-laws", lifting, witness_inline("lifting-iso-laws", form))
    )
    emit(ctx, report, ctx.obj["started"])


@verify.command("order")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def verify_order_cmd(ctx: click.Context, form_path: str, order_path: str) -> None:
    report = RunReport(command=["verify", "order", form_path, order_path])
    form = load_form_file(form_path, report)
    order = load_order_file(order_path, report)
    try:
        rep = verify_order(form, order)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    report.checks.append(
        check_from_report("order-axioms", rep, witness_inline("order-axioms", form, order))
    )
    if rep.ok:
        cls = classify_order(form, order)
        report.checks.append(CheckResult("order-class", "pass", checks_run=1, data=cls.to_dict()))
    emit(ctx, report, ctx.obj["started"])


def _verify_operator(ctx: click.Context, kind: str, form_path: str, op_path: str) -> None:
    report = RunReport(command=["verify", kind, form_path, op_path])
    form = load_form_file(form_path, report)
    report.inputs[op_path] = digest_file(op_path)
    op = operator_from_dict(load_json(op_path), kind, where=op_path)
    try:
        rep = verify_closure(form, op) if kind == "closure" else verify_interior(form, op)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    recipe = {"kind": "inline", "form": form_to_dict(form), "operator": operator_to_dict(op), "operator_kind": kind}
    report.checks.append(check_from_report(f"{kind}-axioms", rep, make_witness(f"{kind}-axioms", recipe)))
    emit(ctx, report, ctx.obj["started"])


@verify.command("closure")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--operator", "op_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def verify_closure_cmd(ctx: click.Context, form_path: str, op_path: str) -> None:
    _verify_operator(ctx, "closure", form_path, op_path)


@verify.command("interior")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--operator", "op_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def verify_interior_cmd(ctx: click.Context, form_path: str, op_path: str) -> None:
    _verify_operator(ctx, "interior", form_path, op_path)


@main.group()
def derive() -> None:
    """Derive operators from orders, orders from operators, or the built-in
    topology orders."""


def _emit_derived(ctx: click.Context, report: RunReport, doc: dict, out: Optional[str]) -> None:
    if out:
        dump_json(doc, out)
        report.payload = {"written": out}
    else:
        report.payload = doc
    emit(ctx, report, ctx.obj["started"])


@derive.command("closure")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_closure_cmd(ctx, form_path, order_path, out) -> None:
    report = RunReport(command=["derive", "closure", form_path, order_path])
    form = load_form_file(form_path, report)
    order = load_order_file(order_path, report)
    clo = closure_from_order(form, order)
    _emit_derived(ctx, report, operator_to_dict(clo), out)


@derive.command("interior")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_interior_cmd(ctx, form_path, order_path, out) -> None:
    report = RunReport(command=["derive", "interior", form_path, order_path])
    form = load_form_file(form_path, report)
    order = load_order_file(order_path, report)
    _emit_derived(ctx, report, operator_to_dict(interior_from_order(form, order)), out)


@derive.command("order-from-closure")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--operator", "op_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_ofc_cmd(ctx, form_path, op_path, out) -> None:
    report = RunReport(command=["derive", "order-from-closure", form_path, op_path])
    form = load_form_file(form_path, report)
    report.inputs[op_path] = digest_file(op_path)
    clo = operator_from_dict(load_json(op_path), "closure", where=op_path)
    _emit_derived(ctx, report, order_to_dict(order_from_closure(form, clo)), out)


@derive.command("order-from-interior")
@click.option("--form", "form_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--operator", "op_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_ofi_cmd(ctx, form_path, op_path, out) -> None:
    report = RunReport(command=["derive", "order-from-interior", form_path, op_path])
    form = load_form_file(form_path, report)
    report.inputs[op_path] = digest_file(op_path)
    intr = operator_from_dict(load_json(op_path), "interior", where=op_path)
    _emit_derived(ctx, report, order_to_dict(order_from_interior(form, intr)), out)


@derive.command("theta")
@click.option("--n", required=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_theta_cmd(ctx, n, out) -> None:
    report = RunReport(command=["derive", "theta", str(n)])
    rows = theta_relation(n)
    size = len(rows)
    doc = {
        "form": f"top[{n}]",
        "rel": {f"{n}pt": [[bool((rows[a] >> b) & 1) for b in range(size)] for a in range(size)]},
    }
    _emit_derived(ctx, report, doc, out)


@derive.command("b")
@click.option("--n", required=True, type=int)
@click.option("--out", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def derive_b_cmd(ctx, n, out) -> None:
    report = RunReport(command=["derive", "b", str(n)])
    rows = b_relation(n)
    size = len(rows)
    doc = {
        "form": f"top[{n}]",
        "rel": {f"{n}pt": [[bool((rows[a] >> b) & 1) for b in range(size)] for a in range(size)]},
    }
    _emit_derived(ctx, report, doc, out)


@main.command("classify")
@click.option("--form", "form_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--instance", type=click.Choice(["top", "grp", "quot"]))
@click.option("--sizes", type=str)
@click.option("--corpus", type=str, default="standard", show_default=True)
@click.option("--max-order", type=int, default=8, show_default=True)
@click.option("--order-name", type=click.Choice(NAMED_ORDERS))
@click.option("--morphism", "morphism", type=str)
@click.pass_context
@run_guarded
def classify_cmd(ctx, form_path, order_path, instance, sizes, corpus, max_order, order_name, morphism) -> None:
    """Strict/final/thick status, per morphism, as a MorphismReport array."""
    report = RunReport(command=["classify"])
    form, order, recipe = resolve_form_order(
        report, form_path, order_path, instance, sizes, corpus, max_order, order_name
    )
    axioms = verify_order(form, order)
    report.checks.append(check_from_report("order-axioms", axioms, make_witness("order-axioms", recipe)))
    if axioms.ok:
        targets = [morphism] if morphism else list(form.base.morphisms())
        for f in targets:
            if f not in form.base.dom:
                fail_usage(f"unknown morphism {f!r}")
        report.payload = {"morphisms": [classify_morphism(form, order, f).to_dict() for f in targets]}
    emit(ctx, report, ctx.obj["started"])


@main.command("check-theorems")
@click.option("--form", "form_path", type=click.Path(exists=True, dir_okay=False))
@click.option("--order", "order_spec", type=str, help="order file, or a named order with --instance")
@click.option("--instance", type=click.Choice(["top", "grp", "quot"]))
@click.option("--sizes", type=str)
@click.option("--corpus", type=str, default="standard", show_default=True)
@click.option("--max-order", type=int, default=8, show_default=True)
@click.option("--check", "selected", multiple=True, help="restrict to named checks")
@click.pass_context
@run_guarded
def check_theorems_cmd(ctx, form_path, order_spec, instance, sizes, corpus, max_order, selected) -> None:
    """Run the whole theorem battery for a form and order."""
    report = RunReport(command=["check-theorems"])
    order_name = order_spec if (order_spec in NAMED_ORDERS or order_spec is None) else None
    order_path = order_spec if order_name is None else None
    bundle = None
    if instance is not None:
        bundle = build_instance(instance, sizes, corpus, max_order)
        if order_path is not None:
            order = load_order_file(order_path, report)
            recipe = dict(bundle.recipe, order_file=order_path)
        else:
            order = bundle.named_order(order_name or "leq")
            recipe = dict(bundle.recipe, order=order_name or "leq")
        form = bundle.form
    else:
        form, order, recipe = resolve_form_order(
            report, form_path, order_path, None, sizes, corpus, max_order, order_name
        )
    report.checks.extend(theorem_checks(form, order, recipe, bundle, selected))
    emit(ctx, report, ctx.obj["started"])


@main.group("enumerate")
def enumerate_group() -> None:
    """Enumerate topologies, subgroups, or partitions."""


@enumerate_group.command("topologies")
@click.option("--n", required=True, type=int)
@click.pass_context
@run_guarded
def enum_top_cmd(ctx, n) -> None:
    report = RunReport(command=["enumerate", "topologies", str(n)])
    try:
        tops = enumerate_topologies(n)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    report.payload = {"n": n, "count": len(tops), "topologies": [topology_to_dict(t) for t in tops]}
    emit(ctx, report, ctx.obj["started"])


@enumerate_group.command("subgroups")
@click.option("--group", "name", type=str, help="a corpus group name such as S3 or Q8")
@click.option("--file", "path", type=click.Path(exists=True, dir_okay=False), help="a Cayley-table JSON file")
@click.pass_context
@run_guarded
def enum_sub_cmd(ctx, name, path) -> None:
    report = RunReport(command=["enumerate", "subgroups", name or path or ""])
    if (name is None) == (path is None):
        fail_usage("provide exactly one of --group or --file")
    if path is not None:
        report.inputs[path] = digest_file(path)
        group = group_from_dict(load_json(path), where=path)
    else:
        matches = [g for g in standard_corpus(12) if g.name == name]
        if not matches:
            fail_usage(f"unknown corpus group {name!r}")
        group = matches[0]
    bad = group.verify()
    report.checks.append(check_from_report("group-axioms", bad))
    if bad.ok:
        masks = subgroup_masks(group)
        normals = set(normal_subgroup_masks(group))
        report.payload = {
            "group": group.name,
            "order": group.n,
            "count": len(masks),
            "subgroups": [
                {"elements": list(bits(m)), "normal": m in normals} for m in masks
            ],
        }
    emit(ctx, report, ctx.obj["started"])


@enumerate_group.command("partitions")
@click.option("--n", required=True, type=int)
@click.pass_context
@run_guarded
def enum_part_cmd(ctx, n) -> None:
    report = RunReport(command=["enumerate", "partitions", str(n)])
    try:
        parts = enumerate_partitions(n)
    except ValueError as exc:
        raise click.UsageError(str(exc)) from exc
    report.payload = {"n": n, "count": len(parts), "partitions": [partition_to_dict(p) for p in parts]}
    emit(ctx, report, ctx.obj["started"])


@main.group()
def instance() -> None:
    """Build a built-in instance and emit its form descriptor."""


def _emit_instance(ctx: click.Context, bundle: InstanceBundle, emit_path: Optional[str], command: list[str]) -> None:
    report = RunReport(command=command)
    doc = form_to_dict(bundle.form)
    if emit_path:
        dump_json(doc, emit_path)
        report.payload = {
            "written": emit_path,
            "objects": list(bundle.form.base.objects),
            "morphisms": sum(1 for _ in bundle.form.base.morphisms()),
        }
    else:
        report.payload = doc
    emit(ctx, report, ctx.obj["started"])


@instance.command("top")
@click.option("--sizes", required=True, type=str)
@click.option("--emit", "emit_path", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def instance_top_cmd(ctx, sizes, emit_path) -> None:
    bundle = build_instance("top", sizes, "standard", 8)
    _emit_instance(ctx, bundle, emit_path, ["instance", "top", sizes])


@instance.command("grp")
@click.option("--corpus", type=str, default="standard", show_default=True)
@click.option("--max-order", type=int, default=8, show_default=True)
@click.option("--emit", "emit_path", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def instance_grp_cmd(ctx, corpus, max_order, emit_path) -> None:
    bundle = build_instance("grp", None, corpus, max_order)
    _emit_instance(ctx, bundle, emit_path, ["instance", "grp", corpus, str(max_order)])


@instance.command("quot")
@click.option("--sizes", required=True, type=str)
@click.option("--emit", "emit_path", type=click.Path(dir_okay=False))
@click.pass_context
@run_guarded
def instance_quot_cmd(ctx, sizes, emit_path) -> None:
    bundle = build_instance("quot", sizes, "standard", 8)
    _emit_instance(ctx, bundle, emit_path, ["instance", "quot", sizes])


@main.command("search")
@click.option("--claim", required=True, type=str)
@click.option("--budget", type=int, default=1000, show_default=True)
@click.pass_context
@run_guarded
def search_cmd(ctx, claim, budget) -> None:
    """Check a claim against randomly generated forms; any counterexample
    fails the run and is replayable from (seed, index)."""
    if claim not in CLAIMS:
        fail_usage(f"unknown claim {claim!r}; known: {', '.join(sorted(CLAIMS))}")
    seed, jobs = ctx.obj["seed"], ctx.obj["jobs"]
    report = RunReport(command=["search", claim, str(budget), str(seed)])
    outcome = run_search(claim, budget, seed, jobs=jobs)
    rep = Report()
    rep.checks_run = budget
    for ce in outcome["counterexamples"]:
        rep.add(
            "counterexample",
            where=f"index {ce['index']}",
            witness=(ce["seed"], ce["index"]),
            detail=json.dumps(ce["violations"], sort_keys=True),
        )
    witness = None
    if outcome["counterexamples"]:
        first = outcome["counterexamples"][0]
        witness = make_witness(
            "search",
            {"kind": "search", "claim": claim, "seed": first["seed"], "index": first["index"]},
        )
    report.checks.append(check_from_report(f"search:{claim}", rep, witness))
    report.payload = {k: outcome[k] for k in ("claim", "budget", "seed", "forms_checked")}
    emit(ctx, report, ctx.obj["started"])


@main.command("replay")
@click.argument("witness_file", type=click.Path(exists=True, dir_okay=False))
@click.pass_context
@run_guarded
def replay_cmd(ctx, witness_file) -> None:
    """Re-run the single check a witness came from."""
    report = RunReport(command=["replay", witness_file])
    report.inputs[witness_file] = digest_file(witness_file)
    doc = load_json(witness_file)
    if doc.get("schema") != WITNESS_SCHEMA:
        fail_usage(f"{witness_file}: unsupported witness schema {doc.get('schema')!r}")
    check = doc.get("check")
    recipe = doc.get("recipe", {})
    kind = recipe.get("kind")
    if kind == "search":
        ce = run_case(recipe["claim"], recipe["seed"], recipe["index"])
        rep = Report()
        rep.checks_run = 1
        if ce is not None:
            for v in ce.violations:
                rep.add("counterexample", where=f"index {ce.index}", detail=json.dumps(v, sort_keys=True))
        report.checks.append(check_from_report(f"replay:search:{recipe['claim']}", rep))
        emit(ctx, report, ctx.obj["started"])
        return
    if kind == "lattice-file":
        lat = lattice_from_dict(load_json(recipe["file"]), where=recipe["file"])
        report.checks.append(check_from_report("replay:lattice-axioms", lat.verify()))
        emit(ctx, report, ctx.obj["started"])
        return
    if kind == "inline":
        form = form_from_dict(recipe["form"], where=f"{witness_file}#form")
        order = order_from_dict(recipe["order"], where=f"{witness_file}#order") if "order" in recipe else None
        bundle = None
    else:
        bundle = build_instance(
            recipe.get("kind"), ",".join(map(str, recipe.get("sizes", []))) or None,
            recipe.get("corpus", "standard"), recipe.get("max_order", 8),
        )
        form = bundle.form
        if "order_file" in recipe:
            order = load_order_file(recipe["order_file"], report)
        elif "order" in recipe:
            order = bundle.named_order(recipe["order"])
        else:
            order = None
    if check == "base-category":
        report.checks.append(check_from_report("replay:base-category", form.base.verify()))
    elif check == "form-laws":
        report.checks.append(check_from_report("replay:form-laws", form.verify_laws()))
    elif check == "lifting-iso-laws":
        report.checks.append(check_from_report("replay:lifting-iso-laws", form.verify_lifting_iso_laws()))
    elif check in ("closure-axioms", "interior-axioms"):
        op = operator_from_dict(recipe["operator"], recipe["operator_kind"], where=witness_file)
        rep = verify_closure(form, op) if recipe["operator_kind"] == "closure" else verify_interior(form, op)
        report.checks.append(check_from_report(f"replay:{check}", rep))
    elif order is not None:
        report.checks.extend(
            c
            for c in theorem_checks(form, order, recipe, bundle, (check,))
            if c.name == check
        )
        for c in report.checks:
            c.name = f"replay:{c.name}"
    else:
        fail_usage(f"{witness_file}: witness for {check!r} carries no order to replay with")
    emit(ctx, report, ctx.obj["started"])


if __name__ == "__main__":
    main()
