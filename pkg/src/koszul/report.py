"""Analysis orchestration and report emission.

A report is a plain dict of JSON-serializable values (rationals as exact
strings, never floats), so the machine format round-trips losslessly and
byte-identical output follows from sorted-key serialization.  Every
bounded verdict carries the truncation note: Koszulity and global
dimension are statements about all degrees, and the engine only ever
certifies them up to an explicit bound.
"""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Optional

from .errors import NotGorenstein, SpecError
from .homology import (
    GorensteinReport,
    KoszulityCertificate,
    TRUNCATION_NOTE,
    default_certificate_bound,
    gorenstein_check,
    l_complex_cohomology,
)
from .linalg import Matrix
from .nonhomog import (
    NonhomogeneousPresentation,
    build_curved_dual,
    check_pbw_conditions,
    curvature_is_central,
    pbw_verdict,
    verify_curved_dual,
)
from .potential import (
    calabi_yau_check,
    extract_potential,
    relations_from_potential,
    twist_fixes_potential,
)
from .prealgebra import (
    Prealgebra,
    Representation,
    ce_chain_complex,
    ce_cochain_complex,
    dual_top_degree,
    lie_prealgebra_check,
    verify_representation,
)
from .specfile import AlgebraSpec, _render_poly

ALL_CHECKS = (
    "dims",
    "koszulity",
    "gorenstein",
    "lcomplex",
    "potential",
    "pbw",
    "curved",
    "classification",
    "lie",
    "cohomology",
)

MONOMIAL_ORDER_NOTE = (
    "canonical reduced-row-echelon basis of the relation space; standard "
    "monomials are the non-pivot words in pure lexicographic order on "
    "generator indices"
)


def _s(x: Fraction) -> str:
    return str(x)


def _matrix_rows(m: Matrix) -> list[list[str]]:
    return [[_s(c) for c in m.row(i)] for i in range(m.rows)]


def _monomial(word: Iterable[int], names: list[str]) -> str:
    word = tuple(word)
    return "*".join(names[i] for i in word) if word else "1"


def _class_string(vec, words, names) -> str:
    """Render a graded class; dual monomials are space-joined since the
    generator names already carry the star."""
    parts = []
    items = vec.items() if isinstance(vec, dict) else enumerate(vec)
    for i, c in items:
        if not c:
            continue
        mono = " ".join(names[k] for k in words[i]) if words[i] else "1"
        if c == 1:
            parts.append(mono)
        elif c == -1:
            parts.append(f"-{mono}")
        else:
            parts.append(f"({_s(c)}) {mono}")
    return " + ".join(parts).replace("+ -", "- ") if parts else "0"


def _certificate_section(cert: KoszulityCertificate) -> dict:
    homology = {
        str(s.total_degree): {str(n): h for n, h in sorted(s.homology.items())}
        for s in cert.slices
    }
    return {
        "m_max": cert.m_max,
        "certified_up_to_bound": cert.certified,
        "homology": homology,
        "failures": [list(f) for f in cert.failures],
        "note": cert.note,
    }


def _gorenstein_section(g: GorensteinReport) -> dict:
    out: dict = {
        "gorenstein": g.gorenstein,
        "global_dimension": g.global_dim,
        "global_dimension_determined": g.global_dim is not None,
        "dual_dims": list(g.dual_dims),
        "poincare_symmetric": g.poincare_symmetric,
        "koszulity_certified": g.certificate.certified,
        "note": g.note,
    }
    if g.frobenius is not None:
        out["frobenius"] = {
            "top_degree": g.frobenius.top_degree,
            "dims": list(g.frobenius.dims),
            "pairing_ranks": list(g.frobenius.pairing_ranks),
            "pairing_matrices": [_matrix_rows(m) for m in g.frobenius.pairing_matrices],
            "frobenius": g.frobenius.frobenius,
            "failure": g.frobenius.failure,
        }
    else:
        out["frobenius"] = None
    return out


def run_analysis(
    spec: AlgebraSpec,
    requested: Optional[Iterable[str]] = None,
    max_degree: Optional[int] = None,
) -> dict:
    """Dispatch the requested checks over a parsed spec, deterministically.

    ``requested`` defaults to every check that applies to the input (PBW
    and curved sections for any presentation; Lie-prealgebra and
    cohomology sections when there are no constant terms).
    """
    presentation = spec.presentation()
    algebra = presentation.algebra
    names = spec.generators
    classification = presentation.classify()

    if requested is None:
        checks = set(ALL_CHECKS)
        if classification not in ("quadratic-linear", "homogeneous"):
            checks.discard("lie")
            checks.discard("cohomology")
        if not spec.representations:
            checks.discard("cohomology")
    else:
        checks = set(requested)
        unknown = checks - set(ALL_CHECKS)
        if unknown:
            raise SpecError(
                f"unknown checks requested: {', '.join(sorted(unknown))}", 0, 0
            )

    if max_degree is None:
        max_degree = spec.options.get("max_degree")
    if max_degree is None:
        max_degree = default_certificate_bound(algebra)
    max_degree = max(2, max_degree)

    report: dict = {
        "tool": "koszul",
        "format": 1,
        "spec": {
            "name": spec.name,
            "field": spec.field_name,
            "params": {k: _s(v) for k, v in spec.params.items()},
            "generators": list(names),
            "relations": list(spec.relation_texts),
            "options": dict(spec.options),
        },
        "presentation": {
            "generator_count": algebra.d,
            "relation_dim": algebra.relations.dim,
            "canonical_relations": [
                _render_poly(
                    {(k // algebra.d, k % algebra.d): c for k, c in row.items()}, names
                )
                for row in algebra.relations.rows
            ],
            "phi": [[_s(c) for c in row] for row in presentation.phi],
            "phi0": [_s(c) for c in presentation.phi0],
            "monomial_order": MONOMIAL_ORDER_NOTE,
        },
        "bounds": {"max_degree": max_degree, "truncation_note": TRUNCATION_NOTE},
        "checks": {},
    }
    sections = report["checks"]

    needs_gorenstein = checks & {"gorenstein", "potential", "lie"}
    needs_certificate = needs_gorenstein or checks & {"koszulity", "pbw"}

    certificate = None
    gorenstein = None
    if needs_gorenstein:
        gorenstein = gorenstein_check(algebra, max_degree, max_degree)
        certificate = gorenstein.certificate
    elif needs_certificate:
        from .homology import koszulity_certificate

        certificate = koszulity_certificate(algebra, max_degree)

    if "dims" in checks:
        dual = algebra.koszul_dual()
        sections["dims"] = {
            "algebra": {str(n): algebra.dim(n) for n in range(max_degree + 1)},
            "dual": {str(n): dual.dim(n) for n in range(max_degree + 1)},
            "koszul_subspaces": {
                str(n): algebra.koszul_subspace(n).dim for n in range(max_degree + 1)
            },
        }

    if "koszulity" in checks:
        sections["koszulity"] = _certificate_section(certificate)

    if "gorenstein" in checks:
        sections["gorenstein"] = _gorenstein_section(gorenstein)

    if "lcomplex" in checks:
        lrep = l_complex_cohomology(algebra, max_degree)
        consistent = None
        if gorenstein is not None:
            expected = gorenstein.global_dim if gorenstein.gorenstein else None
            consistent = lrep.delta_shape == expected if expected is not None else (
                lrep.delta_shape is None if not gorenstein.gorenstein else None
            )
        sections["lcomplex"] = {
            "m_max": lrep.m_max,
            "cohomology_by_weight": {
                str(t): {str(n): h for n, h in sorted(table.items())}
                for t, table in sorted(lrep.cohomology.items())
            },
            "totals_by_degree": {str(n): h for n, h in sorted(lrep.total_by_degree().items())},
            "single_class_degree": lrep.delta_shape,
            "consistent_with_gorenstein": consistent,
            "note": lrep.note,
        }

    if "potential" in checks:
        try:
            w, q = extract_potential(algebra, report=gorenstein)
            rw = relations_from_potential(w)
            sections["potential"] = {
                "degree": w.degree,
                "components": {
                    _monomial(word, names): _s(c)
                    for word, c in sorted(w.components.items())
                },
                "normalization": "leading lexicographic component scaled to 1",
                "twist_matrix": _matrix_rows(q),
                "calabi_yau": calabi_yau_check(w, q),
                "twist_power_fixes_potential": twist_fixes_potential(w, q),
                "relations_round_trip": rw == algebra.relations,
            }
        except NotGorenstein as exc:
            sections["potential"] = {"error": "not-gorenstein", "detail": str(exc)}

    conditions = None
    if checks & {"pbw", "curved", "lie"}:
        conditions = check_pbw_conditions(presentation)

    if "pbw" in checks:
        verdict = pbw_verdict(presentation, conditions, certificate)
        sections["pbw"] = {
            "overlap_dim": algebra.koszul_subspace(3).dim,
            "conditions": {
                "a": conditions.a,
                "b": conditions.b,
                "c": conditions.c,
            },
            "witness": conditions.witness,
            "verdict": verdict,
            "note": TRUNCATION_NOTE if verdict == "pbw-certified" else None,
        }

    curved = None
    if checks & {"curved", "cohomology"}:
        curved = build_curved_dual(presentation)

    if "curved" in checks:
        cc = verify_curved_dual(curved)
        dual = curved.dual
        words2 = dual.component(2).standard_words
        dual_names = dual.generator_names
        matches = None
        if conditions is not None:
            matches = (conditions.a, conditions.b, conditions.c) == (cc.a, cc.b, cc.c)
        sections["curved"] = {
            "delta": {
                dual_names[lam]: _class_string(curved.delta_gen[lam], words2, dual_names)
                for lam in range(dual.d)
            },
            "curvature": _class_string(curved.curvature, words2, dual_names),
            "conditions": {"a'": cc.a, "b'": cc.b, "c'": cc.c},
            "witness": cc.witness,
            "matches_primal_battery": matches,
            "curvature_central": curvature_is_central(curved),
        }

    if "classification" in checks:
        sections["classification"] = {
            "class": classification,
            "phi_zero": presentation.phi_is_zero(),
            "phi0_zero": presentation.phi0_is_zero(),
        }

    lie_report = None
    if "lie" in checks:
        if classification in ("quadratic-linear", "homogeneous"):
            pre = Prealgebra.from_presentation(presentation)
            lie_report = lie_prealgebra_check(pre, max_degree, max_degree)
            sections["lie"] = {
                "applicable": True,
                "is_lie_prealgebra": lie_report.is_lie_prealgebra,
                "gorenstein": lie_report.gorenstein.gorenstein,
                "global_dimension": lie_report.gorenstein.global_dim,
                "pbw": lie_report.pbw,
                "note": TRUNCATION_NOTE,
            }
        else:
            sections["lie"] = {
                "applicable": False,
                "is_lie_prealgebra": None,
                "reason": f"presentation has constant terms (classification: {classification})",
            }

    if "cohomology" in checks:
        cohomology: dict = {}
        if classification in ("quadratic-linear", "homogeneous"):
            pre = Prealgebra.from_presentation(presentation)
            for rep_spec, rho in zip(spec.representations, spec.representation_objects()):
                entry: dict = {"side": rho.side, "module_dim": rho.dim}
                ok, offending = verify_representation(pre, rho)
                entry["valid"] = ok
                entry["offending_relation"] = offending
                if ok:
                    complex_ = (
                        ce_cochain_complex(pre, rho, curved)
                        if rho.side == "left"
                        else ce_chain_complex(pre, rho, curved)
                    )
                    entry["kind"] = complex_.kind
                    entry["term_dims"] = list(complex_.term_dims)
                    entry["homology"] = list(complex_.homology)
                    entry["euler_characteristic"] = complex_.euler_characteristic()
                    entry["ext_tor_label"] = (
                        "Ext over the enveloping algebra (cochain side)"
                        if rho.side == "left"
                        else "Tor over the enveloping algebra (chain side)"
                    )
                cohomology[rep_spec.name] = entry
            sections["cohomology"] = {
                "applicable": True,
                "representations": cohomology,
            }
        else:
            sections["cohomology"] = {
                "applicable": False,
                "reason": "cohomology tables need a quadratic-linear presentation",
            }

    return report


def emit_report(report: dict, fmt: str = "text") -> str:
    """Serialize a report; 'machine' output is stable-ordered JSON."""
    if fmt == "machine":
        return json.dumps(report, sort_keys=True, indent=2) + "\n"
    if fmt == "text":
        return _render_text(report)
    raise ValueError(f"unknown format {fmt!r}")


def parse_machine_report(text: str) -> dict:
    return json.loads(text)


def _render_text(report: dict) -> str:
    lines: list[str] = []
    spec = report["spec"]
    title = spec["name"] or "algebra"
    lines.append(f"== {title} ==")
    lines.append(f"generators: {' '.join(spec['generators'])}")
    if spec["params"]:
        lines.append(
            "parameters: "
            + ", ".join(f"{k} = {v}" for k, v in spec["params"].items())
        )
    for rel in spec["relations"]:
        lines.append(f"  relation: {rel}")
    pres = report["presentation"]
    lines.append(
        f"relation space dimension: {pres['relation_dim']} (of {pres['generator_count']}^2)"
    )
    bounds = report["bounds"]
    lines.append(f"degree bound: {bounds['max_degree']}")
    lines.append(f"caveat: {bounds['truncation_note']}")
    checks = report["checks"]

    if "dims" in checks:
        lines.append("-- dimensions --")
        table = checks["dims"]
        degs = sorted(table["algebra"], key=int)
        lines.append("  n        : " + " ".join(f"{n:>5}" for n in degs))
        lines.append(
            "  dim A_n  : " + " ".join(f"{table['algebra'][n]:>5}" for n in degs)
        )
        lines.append(
            "  dim A!_n : " + " ".join(f"{table['dual'][n]:>5}" for n in degs)
        )
        lines.append(
            "  dim K_n  : "
            + " ".join(f"{table['koszul_subspaces'][n]:>5}" for n in degs)
        )

    if "koszulity" in checks:
        sec = checks["koszulity"]
        lines.append("-- koszulity --")
        verdict = "CERTIFIED" if sec["certified_up_to_bound"] else "FAILED"
        lines.append(f"  {verdict} up to total degree {sec['m_max']} (finite-degree certificate)")
        for m in sorted(sec["homology"], key=int):
            row = sec["homology"][m]
            rendered = " ".join(f"H_{n}={row[n]}" for n in sorted(row, key=int))
            lines.append(f"    total degree {m}: {rendered}")
        for m, n, h in sec["failures"]:
            lines.append(f"    FAILURE: H_{n} has dimension {h} in total degree {m}")

    if "gorenstein" in checks:
        sec = checks["gorenstein"]
        lines.append("-- gorenstein / poincare duality --")
        lines.append(f"  gorenstein: {sec['gorenstein']}")
        gd = sec["global_dimension"]
        lines.append(
            f"  global dimension: {gd if gd is not None else 'undetermined at this bound'}"
        )
        lines.append(f"  dual dimensions: {sec['dual_dims']}")
        if sec["frobenius"] is not None:
            fr = sec["frobenius"]
            lines.append(
                f"  frobenius test: {fr['frobenius']} (pairing ranks {fr['pairing_ranks']})"
            )
            if fr["failure"]:
                lines.append(f"    failure: {fr['failure']}")

    if "lcomplex" in checks:
        sec = checks["lcomplex"]
        lines.append("-- dual cochain complex (cross-check) --")
        lines.append(f"  cohomology totals by degree: {sec['totals_by_degree']}")
        lines.append(f"  single-class degree: {sec['single_class_degree']}")
        if sec["consistent_with_gorenstein"] is not None:
            lines.append(
                f"  consistent with gorenstein verdict: {sec['consistent_with_gorenstein']}"
            )

    if "potential" in checks:
        sec = checks["potential"]
        lines.append("-- twisted potential --")
        if "error" in sec:
            lines.append(f"  error: {sec['error']} ({sec['detail']})")
        else:
            lines.append(f"  degree: {sec['degree']}")
            for mono, c in sec["components"].items():
                lines.append(f"    w[{mono}] = {c}")
            lines.append("  twist matrix:")
            for row in sec["twist_matrix"]:
                lines.append("    [" + ", ".join(row) + "]")
            lines.append(f"  calabi-yau: {sec['calabi_yau']}")
            lines.append(f"  relations round trip: {sec['relations_round_trip']}")

    if "pbw" in checks:
        sec = checks["pbw"]
        lines.append("-- pbw conditions --")
        conds = sec["conditions"]
        for key in ("a", "b", "c"):
            value = conds[key]
            lines.append(
                f"  condition ({key}): {'not evaluable' if value is None else value}"
            )
        lines.append(f"  verdict: {sec['verdict']}")
        if sec["witness"]:
            lines.append(f"  witness: {sec['witness']}")

    if "curved" in checks:
        sec = checks["curved"]
        lines.append("-- curved differential dual --")
        for gen, img in sec["delta"].items():
            lines.append(f"  delta {gen} = {img}")
        lines.append(f"  curvature F = {sec['curvature']}")
        conds = sec["conditions"]
        for key in ("a'", "b'", "c'"):
            value = conds[key]
            lines.append(
                f"  condition ({key}): {'not evaluable' if value is None else value}"
            )
        lines.append(f"  agrees with primal battery: {sec['matches_primal_battery']}")
        lines.append(f"  curvature central: {sec['curvature_central']}")

    if "classification" in checks:
        sec = checks["classification"]
        lines.append(f"-- classification: {sec['class']} --")

    if "lie" in checks:
        sec = checks["lie"]
        lines.append("-- lie prealgebra --")
        if not sec["applicable"]:
            lines.append(f"  not applicable: {sec.get('reason')}")
        else:
            lines.append(f"  lie prealgebra: {sec['is_lie_prealgebra']}")
            lines.append(
                f"  gorenstein: {sec['gorenstein']}, pbw: {sec['pbw']}"
            )

    if "cohomology" in checks:
        sec = checks["cohomology"]
        lines.append("-- chevalley-eilenberg cohomology --")
        if not sec["applicable"]:
            lines.append(f"  not applicable: {sec.get('reason')}")
        else:
            for name, entry in sorted(sec["representations"].items()):
                if not entry["valid"]:
                    lines.append(
                        f"  {name}: INVALID representation "
                        f"(relation {entry['offending_relation']} not annihilated)"
                    )
                    continue
                lines.append(
                    f"  {name} ({entry['side']}, dim {entry['module_dim']}): "
                    f"homology dims {entry['homology']}"
                )
    return "\n".join(lines) + "\n"
