//! One runner per scenario operation.
//!
//! [`prepare`] validates parameters against the context and returns a job;
//! running the job calls exactly one library operation.

use equivariant_core::algcat::{
    self, center, crossed_product, faithful_decomposition_abelian, fixture_counterexample,
    is_inner, obstruction_class, out_action_and_units, torsor_actions, twisted_center, unit_ratio_class, wedderburn_blocks,
    AlgOptions, DimensionTable,
};
use equivariant_core::coh::{
    coboundary, cohomology_group, enumerate_h2_representatives, inflate, is_coboundary, phase_class, Coefficients,
};
use equivariant_core::prep::{self, alpha_regular_classes, irreps_twisted, twist_table, SplitOptions};
use equivariant_core::sscat::{
    self, check_action, component_count, decompose, equivariant_simples, faithful_decomposition, forget, hom_dim, induce,
    linearize, linearizations_of_simple, restrict_object, reversion_check, serre_report, stable_underlying_check,
    successive_quotient, twist_permutation, EquivSimple, EquivariantObject, Linearizations, PhaseAction,
    PhaseAssignment, SSObject, SerreData,
};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::resolve::{cochain_entries, epimorphism, Context, ValidationError};
use crate::scenario::{CoeffSpec, ObjectSpec, Op, WedderburnTarget, C};

/// Successful run of an analysis.
pub struct Outcome {
    pub pass: bool,
    pub result: Value,
}

/// An analysis that raised an error.
pub struct Failure {
    pub stage: String,
    pub message: String,
}

pub type Job = Box<dyn FnOnce(&Context) -> Result<Outcome, Failure>>;

fn fail(stage: &str, e: impl std::fmt::Display) -> Failure {
    Failure {
        stage: stage.into(),
        message: e.to_string(),
    }
}

fn c2j(z: Complex64) -> Value {
    json!([z.re, z.im])
}

fn complex(c: &C) -> Complex64 {
    Complex64::new(c[0], c[1])
}

fn table_json(t: &DimensionTable) -> Value {
    json!({
        "dim": t.dim,
        "radical_dim": t.radical_dim,
        "simple_dims": t.simple_dims,
        "block_count": t.block_count,
        "block_dims": t.block_dims,
    })
}

fn split(ctx: &Context) -> SplitOptions {
    SplitOptions {
        seed: ctx.seed,
        tolerance: ctx.tolerance.unwrap_or(prep::DEFAULT_TOLERANCE),
        ..SplitOptions::default()
    }
}

fn alg_opts(ctx: &Context) -> AlgOptions {
    AlgOptions {
        tolerance: ctx.tolerance.unwrap_or(algcat::DEFAULT_TOLERANCE),
        seed: ctx.seed,
        budget: ctx.budget,
    }
}

fn ok(pass: bool, result: Value) -> Result<Outcome, Failure> {
    Ok(Outcome { pass, result })
}

fn simples_of(ctx: &Context, stage: &str) -> Result<(PhaseAction, Vec<EquivSimple>), Failure> {
    let pa = ctx.action.as_ref().expect("validated").phases();
    let s = equivariant_simples(&pa, &split(ctx)).map_err(|e| fail(stage, e))?;
    Ok((pa, s))
}

fn simple_json(s: &EquivSimple) -> Value {
    json!({
        "orbit": s.orbit,
        "basepoint": s.basepoint,
        "stabilizer": s.stabilizer,
        "irrep_dim": s.irrep.dim,
        "dim": s.dim(),
    })
}

fn object(pa: &PhaseAction, simples: &[EquivSimple], spec: &ObjectSpec) -> Result<EquivariantObject, Failure> {
    match spec {
        ObjectSpec::Linearized(m) => Ok(linearize(pa, &SSObject::new(m.clone()))),
        ObjectSpec::Simples(m) => {
            if m.len() != simples.len() {
                return Err(fail(
                    "hom_equivariant",
                    format!("{} multiplicities for {} equivariant simples", m.len(), simples.len()),
                ));
            }
            Ok(simples
                .iter()
                .zip(m)
                .fold(EquivariantObject::zero(pa), |acc, (s, &k)| acc.direct_sum(&s.object.power(pa, k))))
        }
    }
}

fn check_object_spec(ctx: &Context, spec: &ObjectSpec) -> Result<(), ValidationError> {
    if let ObjectSpec::Linearized(m) = spec {
        let n = ctx.ss()?.n_simples();
        if m.len() != n {
            return Err(ValidationError::new(
                "object_length",
                format!("{} multiplicities for {n} simples", m.len()),
            ));
        }
    }
    Ok(())
}

fn nonzero_scalars(ctx: &Context, v: &[C]) -> Result<Vec<Complex64>, ValidationError> {
    let n = ctx.ss()?.n_simples();
    if v.len() != n {
        return Err(ValidationError::new("trivialization_length", format!("{} scalars for {n} simples", v.len())));
    }
    let z: Vec<Complex64> = v.iter().map(complex).collect();
    match z.iter().position(|x| !x.is_finite() || x.norm() < 1e-12) {
        Some(i) => Err(ValidationError::new("trivialization_nonzero", format!("scalar at simple {i} is zero"))),
        None => Ok(z),
    }
}

/// Validates `op` against `ctx` and returns the job that runs it.
pub fn prepare(ctx: &Context, op: &Op) -> Result<Job, ValidationError> {
    if let Some(b) = op.backend() {
        if b != ctx.backend {
            return Err(ValidationError::new(
                "backend_matches_analysis",
                format!("`{}` needs the {b:?} backend", op.name()),
            ));
        }
        match b {
            crate::scenario::Backend::Sscat => {
                ctx.ss()?;
            }
            crate::scenario::Backend::Algcat => {
                ctx.algebra()?;
            }
        }
    }
    Ok(match op.clone() {
        Op::GroupInfo => Box::new(|ctx| {
            let g = &ctx.group;
            ok(
                true,
                json!({
                    "order": g.order(),
                    "identity": g.identity(),
                    "abelian": g.is_abelian(),
                    "generators": g.generators(),
                    "element_orders": g.elements().map(|x| g.element_order(x)).collect::<Vec<_>>(),
                }),
            )
        }),
        Op::ConjugacyClasses => Box::new(|ctx| {
            let cp = ctx.group.conjugacy_classes();
            let classes: Vec<Value> = cp
                .classes
                .iter()
                .map(|c| json!({"elements": c.elements, "centralizer_order": c.centralizer_order}))
                .collect();
            ok(true, json!({"count": classes.len(), "classes": classes}))
        }),
        Op::DualGroup => Box::new(|ctx| {
            let chars: Vec<Vec<String>> = ctx
                .group
                .dual_group()
                .iter()
                .map(|c| c.values.iter().map(|v| v.to_string()).collect())
                .collect();
            ok(true, json!({"order": chars.len(), "characters": chars}))
        }),
        Op::Quotient { subgroup } => {
            let h = ctx.normal_subgroup(&subgroup)?;
            Box::new(move |ctx| {
                let (q, p) = ctx.group.quotient(&h).map_err(|e| fail("quotient", e))?;
                ok(true, json!({"order": q.order(), "projection": p.images, "kernel": p.kernel()}))
            })
        }
        Op::Cohomology { degree, coefficients } => {
            let coeff = match coefficients {
                CoeffSpec::Circle => Coefficients::Circle,
                CoeffSpec::Integers => Coefficients::Integers,
                CoeffSpec::Modulo(0) => return Err(ValidationError::new("modulus_positive", "modulus 0")),
                CoeffSpec::Modulo(m) => Coefficients::Modulo(m),
            };
            Box::new(move |ctx| {
                let h = cohomology_group(&ctx.group, degree, coeff, ctx.budget).map_err(|e| fail("cohomology", e))?;
                ok(
                    true,
                    json!({
                        "degree": degree,
                        "divisors": h.divisors,
                        "free_rank": h.free_rank,
                        "order": h.order(),
                    }),
                )
            })
        }
        Op::Coboundary { cochain } => {
            let c = ctx.cochain(&cochain)?;
            Box::new(move |_| {
                let d = coboundary(&c);
                ok(true, json!({"degree": d.degree(), "zero": d.is_zero(), "entries": cochain_entries(&d)}))
            })
        }
        Op::IsCoboundary { cochain } => {
            let c = ctx.cochain(&cochain)?;
            if c.degree() == 0 {
                return Err(ValidationError::new("cochain_degree", "degree 0 cochains are never coboundaries"));
            }
            Box::new(move |ctx| {
                let w = is_coboundary(&c, ctx.budget).map_err(|e| fail("is_coboundary", e))?;
                let verified = w.as_ref().map(|w| coboundary(w) == c);
                ok(
                    verified != Some(false),
                    json!({
                        "coboundary": w.is_some(),
                        "witness": w.as_ref().map(cochain_entries),
                        "verified": verified,
                    }),
                )
            })
        }
        Op::Inflate { cochain, source, images } => {
            let c = ctx.cochain(&cochain)?;
            let epi = epimorphism(ctx, &source, &images)?;
            Box::new(move |ctx| {
                let inf = inflate(&c, &epi).map_err(|e| fail("inflate", e))?;
                let w = is_coboundary(&inf, ctx.budget).map_err(|e| fail("inflate", e))?;
                let verified = w.as_ref().map(|w| coboundary(w) == inf);
                ok(
                    verified != Some(false),
                    json!({
                        "source_order": epi.source.order(),
                        "inflated": cochain_entries(&inf),
                        "coboundary": w.is_some(),
                        "witness": w.as_ref().map(cochain_entries),
                        "verified": verified,
                    }),
                )
            })
        }
        Op::PhaseClass { degree, values } => {
            let expected = ctx.group.order().checked_pow(degree as u32).unwrap_or(usize::MAX);
            if degree == 0 || values.len() != expected {
                return Err(ValidationError::new(
                    "phase_values_length",
                    format!("{} values given, a degree {degree} cochain needs |G|^{degree} = {expected}", values.len()),
                ));
            }
            let vals: Vec<Complex64> = values.iter().map(complex).collect();
            Box::new(move |ctx| {
                let tol = ctx.tolerance.unwrap_or(algcat::INTEGER_TOLERANCE);
                let pc = phase_class(&ctx.group, degree, &vals, tol, ctx.budget).map_err(|e| fail("phase_class", e))?;
                ok(
                    true,
                    json!({
                        "divisors": pc.divisors,
                        "coordinates": pc.coordinates,
                        "zero": pc.is_zero(),
                        "max_residual": pc.max_residual,
                    }),
                )
            })
        }
        Op::H2Representatives => Box::new(|ctx| {
            let reps = enumerate_h2_representatives(&ctx.group, ctx.budget).map_err(|e| fail("h2_representatives", e))?;
            let list: Vec<_> = reps.iter().map(cochain_entries).collect();
            ok(true, json!({"count": reps.len(), "representatives": list}))
        }),
        Op::AlphaRegularClasses { twist } => {
            let alpha = twist_table(&ctx.twist(twist.as_ref())?);
            Box::new(move |ctx| {
                let tol = ctx.tolerance.unwrap_or(prep::DEFAULT_TOLERANCE);
                let cl = alpha_regular_classes(&ctx.group, &alpha, tol).map_err(|e| fail("alpha_regular_classes", e))?;
                ok(true, json!({"count": cl.len(), "classes": cl}))
            })
        }
        Op::IrrepsTwisted { twist } => {
            let alpha = twist_table(&ctx.twist(twist.as_ref())?);
            Box::new(move |ctx| {
                let irr = irreps_twisted(&ctx.group, &alpha, &split(ctx)).map_err(|e| fail("irreps_twisted", e))?;
                let dims: Vec<usize> = irr.iter().map(|r| r.dim).collect();
                let sum: usize = dims.iter().map(|d| d * d).sum();
                let defect = irr.iter().map(|r| r.defect()).fold(0.0, f64::max);
                ok(
                    sum == ctx.group.order(),
                    json!({"count": dims.len(), "dims": dims, "sum_of_squares": sum, "defect": defect}),
                )
            })
        }
        Op::CheckAction => Box::new(|ctx| {
            let r = check_action(ctx.action.as_ref().expect("validated"));
            ok(r.valid, json!({"valid": r.valid, "violation": r.violation.map(|v| format!("{v:?}"))}))
        }),
        Op::EquivariantSimples => Box::new(|ctx| {
            let (_, s) = simples_of(ctx, "equivariant_simples")?;
            ok(true, json!({"count": s.len(), "simples": s.iter().map(simple_json).collect::<Vec<_>>()}))
        }),
        Op::HomEquivariant { x, y } => {
            check_object_spec(ctx, &x)?;
            check_object_spec(ctx, &y)?;
            Box::new(move |ctx| {
                let (pa, s) = simples_of(ctx, "hom_equivariant")?;
                let xo = object(&pa, &s, &x)?;
                let yo = object(&pa, &s, &y)?;
                let d = hom_dim(&pa, &xo, &yo).map_err(|e| fail("hom_equivariant", e))?;
                ok(true, json!({"dim": d}))
            })
        }
        Op::ForgetfulAndLinearize => Box::new(|ctx| {
            let (pa, s) = simples_of(ctx, "forgetful_and_linearize")?;
            let mut linearized = Vec::new();
            for t in 0..pa.n {
                let q = linearize(&pa, &SSObject::simple(pa.n, t));
                linearized.push(decompose(&pa, &q, &s).map_err(|e| fail("forgetful_and_linearize", e))?);
            }
            let forgotten: Vec<Vec<usize>> = s.iter().map(|x| forget(&x.object).multiplicities).collect();
            // Hom^G(q s, X) = Hom(s, p X)
            let adjunction = (0..pa.n).all(|t| (0..s.len()).all(|i| linearized[t][i] == forgotten[i][t]));
            ok(adjunction, json!({"linearized": linearized, "forgotten": forgotten, "adjunction": adjunction}))
        }),
        Op::IndRes { subgroup } => {
            let h = ctx.subgroup(&subgroup)?;
            Box::new(move |ctx| {
                let st = "ind_res";
                let (pa, gs) = simples_of(ctx, st)?;
                let res = pa.restrict(&h).map_err(|e| fail(st, e))?;
                let hs = equivariant_simples(&res.action, &split(ctx)).map_err(|e| fail(st, e))?;
                let mut induced = Vec::new();
                for f in &hs {
                    let ind = induce(&pa, &res, &f.object).map_err(|e| fail(st, e))?;
                    induced.push(decompose(&pa, &ind, &gs).map_err(|e| fail(st, e))?);
                }
                let mut restricted = Vec::new();
                for x in &gs {
                    let r = restrict_object(&res, &x.object);
                    restricted.push(decompose(&res.action, &r, &hs).map_err(|e| fail(st, e))?);
                }
                let frobenius = (0..hs.len()).all(|i| (0..gs.len()).all(|j| induced[i][j] == restricted[j][i]));
                ok(
                    frobenius,
                    json!({
                        "subgroup": h,
                        "h_simple_count": hs.len(),
                        "induced": induced,
                        "restricted": restricted,
                        "frobenius": frobenius,
                    }),
                )
            })
        }
        Op::TwistByCharacter { character } => {
            let dual = ctx.group.dual_group();
            let chi = dual.get(character).cloned().ok_or_else(|| {
                ValidationError::new("character_in_range", format!("character {character} of {}", dual.len()))
            })?;
            Box::new(move |ctx| {
                let (pa, s) = simples_of(ctx, "twist_by_character")?;
                let p = twist_permutation(&pa, &chi, &s).map_err(|e| fail("twist_by_character", e))?;
                let mut sorted = p.clone();
                sorted.sort_unstable();
                let bijective = sorted == (0..s.len()).collect::<Vec<_>>();
                ok(
                    bijective,
                    json!({
                        "character": chi.values.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                        "permutation": p,
                    }),
                )
            })
        }
        Op::LinearizationsOfSimple { simple } => {
            let s = ctx.simple(&simple)?;
            let a = ctx.ss()?;
            if let Some(x) = ctx.group.elements().find(|&x| a.perm(x)[s] != s) {
                return Err(ValidationError::new(
                    "simple_is_invariant",
                    format!("element {} moves simple {s}", ctx.label(x)),
                ));
            }
            Box::new(move |ctx| {
                let l = linearizations_of_simple(ctx.action.as_ref().expect("validated"), s)
                    .map_err(|e| fail("linearizations_of_simple", e))?;
                match l {
                    Linearizations::Obstructed { divisors, coordinates } => ok(
                        true,
                        json!({"obstructed": true, "divisors": divisors, "coordinates": coordinates}),
                    ),
                    Linearizations::Found { phases, free_transitive } => {
                        let phases: Vec<Vec<String>> =
                            phases.iter().map(|p| p.iter().map(|v| v.to_string()).collect()).collect();
                        ok(
                            free_transitive,
                            json!({
                                "obstructed": false,
                                "count": phases.len(),
                                "phases": phases,
                                "free_transitive": free_transitive,
                            }),
                        )
                    }
                }
            })
        }
        Op::SuccessiveQuotient { normal } => {
            let h = ctx.normal_subgroup(&normal)?;
            Box::new(move |ctx| {
                let pa = ctx.action.as_ref().expect("validated").phases();
                let r = successive_quotient(&pa, &h, &split(ctx)).map_err(|e| fail("successive_quotient", e))?;
                ok(
                    r.agree,
                    json!({
                        "quotient_order": r.quotient_order,
                        "h_simple_count": r.h_simple_count,
                        "coherence_defect": r.coherence_defect,
                        "count_direct": r.count_direct,
                        "count_iterated": r.count_iterated,
                        "agree": r.agree,
                    }),
                )
            })
        }
        Op::Reversion => {
            if !ctx.group.is_abelian() {
                return Err(ValidationError::new("abelian_group", "reversion needs an abelian group"));
            }
            Box::new(|ctx| {
                let pa = ctx.action.as_ref().expect("validated").phases();
                let r = reversion_check(&pa, &split(ctx)).map_err(|e| fail("reversion", e))?;
                ok(
                    r.agree,
                    json!({
                        "original_count": r.original_count,
                        "equivariant_count": r.equivariant_count,
                        "double_count": r.double_count,
                        "coherence_defect": r.coherence_defect,
                        "agree": r.agree,
                    }),
                )
            })
        }
        Op::Components => Box::new(|ctx| {
            let pa = ctx.action.as_ref().expect("validated").phases();
            let r = component_count(&pa, &split(ctx)).map_err(|e| fail("components", e))?;
            ok(
                r.agree,
                json!({
                    "count_direct": r.count_direct,
                    "count_formula": r.count_formula,
                    "count_regular": r.count_regular,
                    "class_dims": r.class_dims,
                    "agree": r.agree,
                }),
            )
        }),
        Op::FaithfulDecomposition => Box::new(|ctx| {
            let pa = ctx.action.as_ref().expect("validated").phases();
            let r = faithful_decomposition(&pa, &split(ctx)).map_err(|e| fail("faithful_decomposition", e))?;
            let orbits: Vec<Value> = r
                .orbits
                .iter()
                .map(|o| {
                    json!({
                        "orbit": o.orbit,
                        "subgroup": o.subgroup,
                        "count_direct": o.count_direct,
                        "component_counts": o.component_counts,
                    })
                })
                .collect();
            ok(
                r.verified,
                json!({
                    "subgroup": r.subgroup,
                    "is_subgroup": r.is_subgroup,
                    "components": r.components,
                    "abelian": r.abelian,
                    "orbits": orbits,
                    "verified": r.verified,
                }),
            )
        }),
        Op::StableUnderlying { phases } => {
            let a = ctx.ss()?;
            if phases.len() != a.n_simples() {
                return Err(ValidationError::new(
                    "phases_length",
                    format!("{} phases for {} simples", phases.len(), a.n_simples()),
                ));
            }
            for x in ctx.group.elements() {
                for s in 0..a.n_simples() {
                    let t = a.perm(x)[s];
                    if phases[s] != phases[t] {
                        return Err(ValidationError::new(
                            "phases_orbit_constant",
                            format!("simples {s} and {t} share an orbit but not a phase"),
                        ));
                    }
                }
            }
            Box::new(move |ctx| {
                let pa = ctx.action.as_ref().expect("validated").phases();
                let z = PhaseAssignment { phases };
                let r = stable_underlying_check(&pa, &z, &split(ctx)).map_err(|e| fail("stable_underlying", e))?;
                let all = r.iter().all(|e| e.polystable);
                let entries: Vec<Value> = r
                    .iter()
                    .map(|e| {
                        json!({
                            "basepoint": e.basepoint,
                            "dim": e.dim,
                            "underlying": e.underlying,
                            "polystable": e.polystable,
                            "simple_in_c": e.simple_in_c,
                        })
                    })
                    .collect();
                ok(all, json!({"entries": entries, "all_polystable": all}))
            })
        }
        Op::SerreLiftAndPairing { trivialization } => {
            let sd = SerreData {
                a: nonzero_scalars(ctx, &trivialization)?,
            };
            Box::new(move |ctx| {
                let pa = ctx.action.as_ref().expect("validated").phases();
                let r = serre_report(&pa, &sd, &split(ctx)).map_err(|e| fail("serre_lift_and_pairing", e))?;
                let simple_pairs = r.pairs.iter().filter(|p| p.simples.is_some()).count();
                ok(
                    r.all_perfect,
                    json!({
                        "orbit_constant": r.orbit_constant,
                        "lift_defect": r.lift_defect,
                        "pairs_checked": r.pairs.len(),
                        "simple_pairs": simple_pairs,
                        "all_perfect": r.all_perfect,
                        "naive_all_perfect": r.naive_all_perfect,
                    }),
                )
            })
        }
        Op::Hochschild { trivialization } => {
            let sd = match trivialization {
                Some(t) => Some(SerreData {
                    a: nonzero_scalars(ctx, &t)?,
                }),
                None => None,
            };
            Box::new(move |ctx| {
                let pa = ctx.action.as_ref().expect("validated").phases();
                let r = sscat::hochschild_report(&pa, sd.as_ref(), &split(ctx)).map_err(|e| fail("hochschild", e))?;
                ok(
                    r.consistent(),
                    json!({
                        "fixed_dims": r.fixed_dims,
                        "dim_direct": r.dim_direct,
                        "dim_formula": r.dim_formula,
                        "class_dims": r.class_dims,
                        "action_defect": r.action_defect,
                        "perry_equivariant": r.perry_equivariant,
                        "perry_rank": r.perry_rank,
                        "dual_scalar_defect": r.dual_scalar_defect,
                        "euler": c2j(r.euler),
                        "euler_agrees": r.euler_agrees,
                        "calabi_yau": r.calabi_yau,
                        "cy_dual_fixed": r.cy_dual_fixed,
                        "consistent": r.consistent(),
                    }),
                )
            })
        }
        Op::Center => Box::new(|ctx| {
            let s = ctx.alg.as_ref().expect("validated");
            let z = center(&s.algebra, alg_opts(ctx).tolerance);
            ok(true, json!({"dim": z.dim()}))
        }),
        Op::TwistedCenter { element } => {
            let g = ctx.element(&element)?;
            Box::new(move |ctx| {
                let s = ctx.alg.as_ref().expect("validated");
                let z = twisted_center(&s.algebra, &s.sigmas[g], alg_opts(ctx).tolerance);
                ok(true, json!({"element": g, "dim": z.dim()}))
            })
        }
        Op::IsInner { element } => {
            let g = ctx.element(&element)?;
            Box::new(move |ctx| {
                let s = ctx.alg.as_ref().expect("validated");
                let w = is_inner(&s.algebra, &s.sigmas[g], &alg_opts(ctx));
                ok(
                    true,
                    json!({
                        "element": g,
                        "inner": w.is_some(),
                        "attempts": w.as_ref().map(|w| w.attempts),
                        "unit": w.as_ref().map(|w| w.unit.iter().map(|&z| c2j(z)).collect::<Vec<_>>()),
                    }),
                )
            })
        }
        Op::OutActionAndUnits => Box::new(|ctx| {
            let s = ctx.alg.as_ref().expect("validated");
            let o = alg_opts(ctx);
            let oad = out_action_and_units(&s.algebra, &ctx.group, s.sigmas.clone(), &o)
                .map_err(|e| fail("out_action_and_units", e))?;
            let (g, h, defect) = oad.relation_defect(&s.algebra);
            ok(
                true,
                json!({
                    "honest": oad.is_honest(&s.algebra, o.tolerance),
                    "attempts": oad.attempts,
                    "relation_defect": defect,
                    "worst_pair": [g, h],
                }),
            )
        }),
        Op::ObstructionClass { torsor } => Box::new(move |ctx| {
            let st = "obstruction_class";
            let s = ctx.alg.as_ref().expect("validated");
            let o = alg_opts(ctx);
            let oad = out_action_and_units(&s.algebra, &ctx.group, s.sigmas.clone(), &o).map_err(|e| fail(st, e))?;
            let ob = obstruction_class(&s.algebra, &oad, &o).map_err(|e| fail(st, e))?;
            let mut result = json!({
                "divisors": ob.class.divisors,
                "coordinates": ob.class.coordinates,
                "zero": ob.is_zero(),
                "cocycle_defect": ob.cocycle_defect,
                "scalar_defect": ob.scalar_defect,
                "corrected": ob.corrected.is_some(),
                "corrected_defect": ob.corrected_defect,
            });
            if torsor {
                let members = match &ob.corrected {
                    Some(base) => {
                        let ms = torsor_actions(base, &o).map_err(|e| fail(st, e))?;
                        let mut out = Vec::new();
                        for m in &ms {
                            let ratio = unit_ratio_class(&s.algebra, base, &m.action, &o).map_err(|e| fail(st, e))?;
                            out.push(json!({"twist": cochain_entries(&m.twist), "ratio_coordinates": ratio.coordinates}));
                        }
                        Value::Array(out)
                    }
                    None => Value::Null,
                };
                result["torsor"] = members;
            }
            ok(true, result)
        }),
        Op::CrossedProduct => Box::new(|ctx| {
            let s = ctx.alg.as_ref().expect("validated");
            let o = alg_opts(ctx);
            let cp = crossed_product(&s.algebra, &ctx.group, s.sigmas.clone(), &s.twist, o.tolerance)
                .map_err(|e| fail("crossed_product", e))?;
            let defect = cp.algebra.associativity_defect();
            let z = center(&cp.algebra, o.tolerance);
            ok(
                defect <= o.tolerance.sqrt(),
                json!({"dim": cp.algebra.dim(), "associativity_defect": defect, "center_dim": z.dim()}),
            )
        }),
        Op::WedderburnBlocks { target } => Box::new(move |ctx| {
            let st = "wedderburn_blocks";
            let s = ctx.alg.as_ref().expect("validated");
            let o = alg_opts(ctx);
            let w = match target {
                WedderburnTarget::Base => wedderburn_blocks(&s.algebra, &o),
                WedderburnTarget::Crossed => {
                    let cp = crossed_product(&s.algebra, &ctx.group, s.sigmas.clone(), &s.twist, o.tolerance)
                        .map_err(|e| fail(st, e))?;
                    wedderburn_blocks(&cp.algebra, &o)
                }
            }
            .map_err(|e| fail(st, e))?;
            let mut r = table_json(&w.table());
            r["center_dim"] = json!(w.center_dim);
            r["spectral_gap"] = json!(w.spectral_gap);
            ok(true, r)
        }),
        Op::FaithfulDecompositionAbelian => Box::new(|ctx| {
            let s = ctx.alg.as_ref().expect("validated");
            let f = faithful_decomposition_abelian(&s.algebra, &ctx.group, s.sigmas.clone(), &s.twist, &alg_opts(ctx))
                .map_err(|e| fail("faithful_decomposition_abelian", e))?;
            let comps: Vec<Value> = f
                .components
                .iter()
                .map(|c| {
                    json!({
                        "character": c.character.iter().map(|&z| c2j(z)).collect::<Vec<_>>(),
                        "block": table_json(&c.block),
                        "reconstructed": table_json(&c.reconstructed),
                        "agree": c.agree,
                    })
                })
                .collect();
            ok(
                f.verified,
                json!({
                    "subgroup": f.subgroup,
                    "is_subgroup": f.is_subgroup,
                    "summand_dims": f.summand_dims,
                    "invariant_dims": f.invariant_dims,
                    "center_dim": f.center_dim,
                    "crossed": table_json(&f.crossed),
                    "quotient_order": f.quotient_order,
                    "block_count": f.components.len(),
                    "components": comps,
                    "verified": f.verified,
                }),
            )
        }),
        Op::FixtureCounterexample => Box::new(|ctx| {
            let r = fixture_counterexample(&alg_opts(ctx)).map_err(|e| fail("fixture_counterexample", e))?;
            ok(
                r.passed(),
                json!({
                    "hypothesis": {
                        "base_dim": r.base_dim,
                        "base_center_dim": r.base_center_dim,
                        "rotation_order": r.rotation_order,
                        "rotation_square_inner": r.rotation_square_inner,
                        "crossed_dim": r.crossed_dim,
                        "crossed_center_dim": r.crossed_center_dim,
                    },
                    "obstruction": {
                        "units_found": r.candidate_units_found,
                        "unit_attempts": r.unit_attempts,
                        "cocycle_defect": r.cocycle_defect,
                        "scalar_defect": r.scalar_defect,
                        "divisors": r.divisors,
                        "coordinates": r.coordinates,
                        "nonzero": r.obstruction_nonzero,
                        "stable_over_seeds": r.stability.stable,
                        "seed_coordinates": r.stability.coordinates,
                        "simple_permutation": r.simple_permutation,
                        "fixed_simples": r.fixed_simples,
                        "resolved_coordinates": r.resolved_coordinates,
                    },
                    "equivalence": {
                        "d_prime": table_json(&r.d_prime),
                        "d_prime_z4": table_json(&r.d_prime_z4),
                        "simple_counts_match": r.simple_counts_match,
                        "dims_double": r.dims_double,
                        "linearization_defect": r.linearization_defect,
                    },
                    "passed": r.passed(),
                }),
            )
        }),
    })
}

