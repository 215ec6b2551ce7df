"""Form records, invariant reports, and the congruence transfer check.

The analytic p-adic L-function itself is input data here: the harness
verifies relations between supplied Lambda-elements and the local
factors it derives from eigenvalue data, rather than constructing
L-functions from scratch.
"""

from __future__ import annotations

import hashlib
import json
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .characters import (DirichletCharacter, is_residually_trivial,
                         trivial_character)
from .cyclotomic import CycNumber
from .errors import (InsufficientPrecision, NotEmbeddable, NotOrdinary,
                     SchemaError)
from .euler import (EulerFactor, SatakeData, assemble_imprimitive,
                    euler_to_lambda, symsq_factor)
from .iwasawa import IwasawaElement, congruent_mod_p, invariants
from .padic import int_valuation, is_prime


@dataclass
class FormRecord:
    """Eigenvalue data for one p-stabilized-eligible form."""

    label: str
    weight: int
    level: int                      # prime-to-p part of the level
    character: DirichletCharacter
    ap: dict[int, object]           # prime -> exact eigenvalue
    p: int
    precision: int
    trunc: int
    bad_primes: dict[int, dict] = field(default_factory=dict)
    flags: dict[str, bool] = field(default_factory=dict)
    source: str | None = None

    def satake(self, q: int) -> SatakeData:
        """Local Satake data at q, from the eigenvalue map or overrides."""
        if q == self.p:
            raise ValueError("local data at p is handled by stabilization")
        if self.level % q == 0:
            entry = self.bad_primes[q]
            rtype = entry["type"]
            aq = _parse_exact(entry.get("aq", "0"))
            return SatakeData(q, rtype, aq, 0, self.weight)
        if q not in self.ap:
            raise SchemaError(
                f"eigenvalue a({q}) not in the record (bound too small)")
        return SatakeData(q, "unramified", self.ap[q],
                          self.character(q), self.weight)

    def euler_factor(self, q: int) -> EulerFactor:
        """Untwisted local factor, honouring explicit polynomial overrides."""
        entry = self.bad_primes.get(q)
        if entry and "poly" in entry:
            coeffs = tuple(_parse_coeff(c) for c in entry["poly"])
            return EulerFactor(q, coeffs)
        return symsq_factor(self.satake(q), 1)


def _parse_exact(s):
    f = Fraction(str(s))
    return int(f) if f.denominator == 1 else f


def _parse_coeff(c):
    if isinstance(c, dict):
        return CycNumber.from_json(c)
    return _parse_exact(c)


def load_form(path: str | Path) -> FormRecord:
    """Parse and fully validate a form record; errors are enumerated."""
    path = Path(path)
    try:
        rec = json.loads(path.read_text())
    except OSError as exc:
        raise SchemaError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise SchemaError(f"malformed JSON in {path}: {exc}") from exc
    problems = []
    for key in ("label", "weight", "level", "character", "ap",
                "p", "precision", "trunc"):
        if key not in rec:
            problems.append(f"missing key {key!r}")
    if problems:
        raise SchemaError("; ".join(problems))

    label = str(rec["label"])
    weight, level = rec["weight"], rec["level"]
    p, precision, trunc = rec["p"], rec["precision"], rec["trunc"]
    if not isinstance(weight, int) or weight < 2:
        problems.append(f"weight must be an integer >= 2, got {weight!r}")
    if not isinstance(level, int) or level < 1:
        problems.append(f"level must be a positive integer, got {level!r}")
    if not isinstance(p, int) or p < 5 or not is_prime(p):
        problems.append(f"p must be a prime >= 5, got {p!r}")
    elif isinstance(level, int) and level % p == 0:
        problems.append(f"level {level} must be prime to p = {p}")
    if not isinstance(precision, int) or precision < 1:
        problems.append(f"precision must be >= 1, got {precision!r}")
    if not isinstance(trunc, int) or trunc < 1:
        problems.append(f"trunc must be >= 1, got {trunc!r}")

    try:
        character = DirichletCharacter.from_json(rec["character"])
    except SchemaError as exc:
        problems.append(str(exc))
        character = trivial_character(1)
    if isinstance(level, int) and level >= 1 and \
            level % character.modulus != 0:
        problems.append(
            f"character modulus {character.modulus} does not divide "
            f"the level {level}")

    ap: dict[int, object] = {}
    for key, value in rec["ap"].items():
        try:
            q = int(key)
            ap[q] = _parse_exact(value)
        except (ValueError, TypeError):
            problems.append(f"bad eigenvalue entry {key!r}: {value!r}")
            continue
        if not is_prime(q):
            problems.append(f"eigenvalue index {q} is not prime")

    bad_primes: dict[int, dict] = {}
    for key, entry in rec.get("bad_primes", {}).items():
        q = int(key)
        bad_primes[q] = entry
        if isinstance(level, int) and level % q != 0:
            problems.append(f"bad-prime override at {q} but {q} does not "
                            f"divide the level {level}")
        if "poly" not in entry and entry.get("type") not in (
                "ordinary", "depleted"):
            problems.append(f"bad-prime entry at {q} needs a type "
                            f"(ordinary|depleted) or an explicit poly")
    if isinstance(level, int):
        for q in _prime_divisors(level):
            if q not in bad_primes:
                problems.append(f"no bad-prime entry for level prime {q}")
    if problems:
        raise SchemaError("; ".join(problems))

    form = FormRecord(label, weight, level, character, ap, p, precision,
                      trunc, bad_primes, dict(rec.get("flags", {})),
                      source=str(path))
    # ordinarity is checked on load, not at first use
    if p not in ap:
        raise SchemaError(f"record has no a_{p}; ordinarity cannot be checked")
    a_p = ap[p]
    if _val_of(a_p, p) != 0:
        raise NotOrdinary(f"a_{p} = {a_p} is not a unit at {p}")
    # every referenced character value must land in Z_p
    if (p - 1) % character.order != 0:
        raise NotEmbeddable(
            f"nebentype order {character.order} does not divide p-1 = {p - 1}")
    return form


def _val_of(x, p: int) -> int | None:
    f = Fraction(x)
    if f == 0:
        return None
    return int_valuation(f.numerator, p) - int_valuation(f.denominator, p)


def _prime_divisors(n: int) -> list[int]:
    out, q = [], 2
    while q * q <= n:
        if n % q == 0:
            out.append(q)
            while n % q == 0:
                n //= q
        q += 1
    if n > 1:
        out.append(n)
    return out


# -- Euler factor cache ------------------------------------------------------


def cache_key(form: FormRecord, q: int, psi: DirichletCharacter, t: int,
              primitive_root: int | None) -> str:
    factor = form.euler_factor(q)
    payload = json.dumps({
        "label": form.label, "q": q, "psi": psi.to_json(), "t": t,
        "p": form.p, "precision": form.precision, "trunc": form.trunc,
        "root": primitive_root,
        "coeffs": [str(c) if not isinstance(c, CycNumber) else c.to_json()
                   for c in factor.coeffs],
    }, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()


def lift_factor(form: FormRecord, q: int, psi: DirichletCharacter, t: int,
                primitive_root: int | None = None,
                cache_dir: str | Path | None = None) -> IwasawaElement:
    """Lambda-lift of the local factor at q, optionally content-cached."""
    if cache_dir is not None:
        path = Path(cache_dir) / (cache_key(form, q, psi, t,
                                            primitive_root) + ".json")
        if path.exists():
            return IwasawaElement.from_json(json.loads(path.read_text()))
    lifted = euler_to_lambda(form.euler_factor(q), psi, t, form.p,
                             form.precision, form.trunc, primitive_root)
    if cache_dir is not None:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(json.dumps(lifted.to_json(), sort_keys=True))
    return lifted


# -- invariant report ---------------------------------------------------------


@dataclass
class InvariantReport:
    """Everything the report subcommand knows, JSON-ready."""

    form_label: str
    p: int
    precision: int
    trunc: int
    psi: dict
    t: int
    table: list[dict]               # per-prime rows, ascending q
    sigma_total: int
    lfun: dict | None = None        # mu/lambda of L and of the product
    assertions: list[dict] = field(default_factory=list)
    provenance: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(a["ok"] for a in self.assertions)

    def to_json(self) -> dict:
        return {
            "form": self.form_label, "p": self.p,
            "precision": self.precision, "trunc": self.trunc,
            "psi": self.psi, "t": self.t,
            "sigma_table": self.table, "sigma_total": self.sigma_total,
            "lfun": self.lfun, "assertions": self.assertions,
            "provenance": self.provenance, "passed": self.passed,
        }

    def to_text(self) -> str:
        lines = [f"form {self.form_label}  p={self.p} N={self.precision} "
                 f"D={self.trunc} t={self.t}"]
        for row in self.table:
            lines.append(f"q={row['q']:<6} type={row['type']:<11} "
                         f"sigma={row['sigma']}")
        lines.append(f"sigma_total={self.sigma_total}")
        if self.lfun is not None:
            lines.append(f"L: mu={self.lfun['mu']} lambda={self.lfun['lambda']}")
            lines.append(f"L_S0: mu={self.lfun['mu_imprimitive']} "
                         f"lambda={self.lfun['lambda_imprimitive']}")
        for a in self.assertions:
            lines.append(f"[{'ok' if a['ok'] else 'FAIL'}] {a['name']}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines) + "\n"


def invariant_report(form: FormRecord, psi: DirichletCharacter, t: int,
                     s0, lfun: IwasawaElement | None = None,
                     primitive_root: int | None = None,
                     cache_dir: str | Path | None = None) -> InvariantReport:
    """sigma table over s0, and the additivity check when L is supplied."""
    s0 = sorted(set(s0))
    if form.p in s0:
        raise ValueError(f"S0 must not contain p = {form.p}")
    twisted_sq = (psi * form.character)**2
    if is_residually_trivial(twisted_sq, form.p):
        warnings.warn(
            f"(psi*eps)^2 is residually trivial mod {form.p}; the "
            "integrality hypotheses behind the report are not guaranteed",
            RuntimeWarning, stacklevel=2)
    if lfun is not None:
        if lfun.p != form.p:
            raise ValueError("L-function prime differs from the form's")
        if lfun.prec < form.precision or lfun.trunc < form.trunc:
            raise ValueError("L-function precision/truncation too small")
        lfun = lfun.reduce(form.precision).truncate(form.trunc)

    table, lifts, sigma_total = [], [], 0
    for q in s0:
        factor = form.euler_factor(q)
        lifted = lift_factor(form, q, psi, t, primitive_root, cache_dir)
        mu_q, lam_q = invariants(lifted)
        rtype = (form.bad_primes[q].get("type", "override")
                 if form.level % q == 0 else "unramified")
        table.append({"q": q, "type": rtype, "sigma": lam_q,
                      "degree": factor.degree, "mu": mu_q})
        lifts.append(lifted)
        sigma_total += lam_q

    report = InvariantReport(
        form_label=form.label, p=form.p, precision=form.precision,
        trunc=form.trunc, psi=psi.to_json(), t=t, table=table,
        sigma_total=sigma_total,
        provenance={"form_source": form.source or "<memory>",
                    "primitive_root": primitive_root},
    )
    for row in table:
        report.assertions.append({
            "name": f"mu = 0 for the local factor at q={row['q']}",
            "ok": row["mu"] == 0})
    if lfun is not None:
        mu_l, lam_l = invariants(lfun)
        product = assemble_imprimitive(lfun, lifts)
        mu_s, lam_s = invariants(product)
        report.lfun = {"mu": mu_l, "lambda": lam_l,
                       "mu_imprimitive": mu_s, "lambda_imprimitive": lam_s}
        report.assertions.append({
            "name": "mu unchanged by imprimitive assembly",
            "ok": mu_s == mu_l})
        report.assertions.append({
            "name": "lambda_S0 = lambda + sum(sigma)",
            "ok": lam_s == lam_l + sigma_total})
    return report


def congruence_transfer_check(f: IwasawaElement, g: IwasawaElement,
                              p: int) -> dict:
    """Mod-p congruence up to unit, and the lambda transfer when mu = 0.

    Returns a JSON-ready verdict; 'no_conclusion' means the congruence
    holds but mu > 0, so the transfer theorem does not apply.
    """
    if f.p != p or g.p != p:
        raise ValueError("elements do not live over the requested prime")
    verdict = congruent_mod_p(f, g, allow_unit_scalar=True)
    out: dict = {"congruent": verdict.congruent, "unit": verdict.unit}
    if not verdict.congruent:
        out["conclusion"] = "not_congruent"
        out["counterexample"] = {
            "index": verdict.mismatch_index,
            "coefficients_mod_p": list(verdict.mismatch)}
        return out
    try:
        mu_f, lam_f = invariants(f)
    except InsufficientPrecision:
        mu_f, lam_f = None, None
    try:
        mu_g, lam_g = invariants(g)
    except InsufficientPrecision:
        mu_g, lam_g = None, None
    out.update({"mu_f": mu_f, "lambda_f": lam_f,
                "mu_g": mu_g, "lambda_g": lam_g})
    if mu_f != 0:
        out["conclusion"] = "no_conclusion"
        return out
    ok = (mu_g == 0) and (lam_f == lam_g)
    out["conclusion"] = "transfer_verified" if ok else "transfer_failed"
    return out


def emit_report(report, fmt: str, path: str | Path | None = None) -> int:
    """Serialize deterministically; exit code 0 on all-pass else 1."""
    if isinstance(report, InvariantReport):
        payload = report.to_json()
        text = report.to_text()
        passed = report.passed
    else:
        payload = report
        text = json.dumps(report, sort_keys=True, indent=2) + "\n"
        passed = report.get("conclusion") not in (
            "transfer_failed", "not_congruent") and not report.get("failed", False)
    if fmt == "json":
        rendered = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    elif fmt == "text":
        rendered = text
    else:
        raise ValueError(f"unknown format {fmt!r}")
    if path is None:
        print(rendered, end="")
    else:
        Path(path).write_text(rendered)
    return 0 if passed else 1
