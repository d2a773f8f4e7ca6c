//! Seeded verification suites: the symbolic identities of the construction
//! plus randomized incidence, flow and slice checks. Every suite is
//! deterministic for a fixed seed; random rationals draw their numerator
//! from [-9, 9] and denominator from [1, 9].

use std::sync::Arc;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha12Rng;

use crate::derivation::{AffinePoint, Derivation};
use crate::error::{Error, Result};
use crate::gamma::{
    chow_form, incidence_assignment, incidence_form, reduced_incidence_form,
    reduced_incidence_form_recursive, GammaForm,
};
use crate::rational::{factorial, Rational};
use crate::vars::{VarKind, VarTable};

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl SuiteOutcome {
    fn pass(name: &'static str, detail: impl Into<String>) -> SuiteOutcome {
        SuiteOutcome {
            name,
            passed: true,
            detail: detail.into(),
        }
    }

    fn fail(name: &'static str, detail: impl Into<String>) -> SuiteOutcome {
        SuiteOutcome {
            name,
            passed: false,
            detail: detail.into(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct CheckReport {
    pub degree: usize,
    pub outcomes: Vec<SuiteOutcome>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.outcomes.iter().all(|o| o.passed)
    }

    pub fn first_failure(&self) -> Option<&SuiteOutcome> {
        self.outcomes.iter().find(|o| !o.passed)
    }
}

pub fn random_rational(rng: &mut ChaCha12Rng) -> Rational {
    Rational::new(
        BigInt::from(rng.gen_range(-9i64..=9)),
        BigInt::from(rng.gen_range(1i64..=9)),
    )
}

pub fn random_point(n: usize, rng: &mut ChaCha12Rng) -> AffinePoint {
    AffinePoint((0..n).map(|_| random_rational(rng)).collect())
}

/// Redraws until the point lies in the generic locus.
pub fn random_generic_point(d: &Derivation, rng: &mut ChaCha12Rng) -> Result<AffinePoint> {
    for _ in 0..400 {
        let x = random_point(d.n(), rng);
        if d.in_generic_locus(&x)? {
            return Ok(x);
        }
    }
    Err(Error::DecompositionFailed(
        "could not sample a generic point".to_string(),
    ))
}

/// Random hyperplane through the projective point `[1 : y]`: free dual
/// coordinates at indices 1..=n and the index-0 coordinate solved from the
/// incidence relation.
pub fn hyperplane_through(y: &AffinePoint, rng: &mut ChaCha12Rng) -> Vec<Rational> {
    loop {
        let free: Vec<Rational> = (0..y.dim()).map(|_| random_rational(rng)).collect();
        if free.iter().all(|v| v.is_zero()) {
            continue;
        }
        let mut a0 = Rational::zero();
        for (j, v) in free.iter().enumerate() {
            a0 -= v * &y.0[j];
        }
        let mut out = vec![a0];
        out.extend(free);
        return out;
    }
}

struct Ctx {
    table: Arc<VarTable>,
    degree: usize,
    chow: GammaForm,
    raw: Vec<Vec<GammaForm>>,
    reduced: Vec<Vec<GammaForm>>,
}

impl Ctx {
    fn build(d: &Derivation) -> Result<Ctx> {
        let degree = d.degree();
        let raw = (0..=degree)
            .map(|l| {
                (0..=degree)
                    .map(|k| incidence_form(d, l, k))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        let reduced = (0..=degree)
            .map(|l| {
                (0..=degree)
                    .map(|k| reduced_incidence_form(d, l, k))
                    .collect::<Result<_>>()
            })
            .collect::<Result<_>>()?;
        Ok(Ctx {
            table: Arc::clone(d.table()),
            degree,
            chow: chow_form(d)?,
            raw,
            reduced,
        })
    }
}

/// Runs every suite with `trials` randomized cases each. Symbolic suites
/// ignore the trial count.
pub fn run_checks(d: &Derivation, trials: usize, seed: u64) -> Result<CheckReport> {
    let ctx = Ctx::build(d)?;
    let stream_rng = |idx: u64| {
        let mut rng = ChaCha12Rng::seed_from_u64(seed);
        rng.set_stream(idx);
        rng
    };
    let outcomes = vec![
        local_nilpotency(d),
        antisymmetry(d, &ctx),
        boundary_vanishing(&ctx),
        recursion_oracle(d, &ctx)?,
        degree_two_shortcut(&ctx)?,
        tau_invariance(&ctx),
        bidegree(&ctx)?,
        leading_coefficient(d, &ctx)?,
        incidence_vanishing(d, &ctx, trials, &mut stream_rng(1))?,
        non_incidence_nonzero(d, &ctx, trials, &mut stream_rng(2))?,
        system_equivalence(d, &ctx, trials, &mut stream_rng(3))?,
        flow_additivity(d, trials, &mut stream_rng(4))?,
        slice_identity(d, trials, &mut stream_rng(5))?,
        locus_stability(d, trials, &mut stream_rng(6))?,
    ];
    Ok(CheckReport {
        degree: ctx.degree,
        outcomes,
    })
}

fn local_nilpotency(d: &Derivation) -> SuiteOutcome {
    let name = "local-nilpotency";
    let deg = d.degree();
    for j in 0..=d.n() {
        if !d.power(deg + 1, j).is_zero() {
            return SuiteOutcome::fail(name, format!("delta^{} x{} != 0", deg + 1, j));
        }
    }
    if (1..=d.n()).all(|j| d.power(deg, j).is_zero()) && deg > 0 {
        return SuiteOutcome::fail(name, format!("delta^{deg} annihilates every coordinate"));
    }
    SuiteOutcome::pass(name, format!("delta^{} x_j = 0 for all j", deg + 1))
}

fn antisymmetry(_d: &Derivation, ctx: &Ctx) -> SuiteOutcome {
    let name = "antisymmetry";
    for l in 0..=ctx.degree {
        for k in 0..=ctx.degree {
            let sum = ctx.raw[l][k].add(&ctx.raw[k][l]).expect("same table");
            if !sum.is_zero() {
                return SuiteOutcome::fail(name, format!("f_{l}{k} + f_{k}{l} != 0"));
            }
        }
    }
    SuiteOutcome::pass(name, "f_lk + f_kl = 0 for all pairs")
}

fn boundary_vanishing(ctx: &Ctx) -> SuiteOutcome {
    let name = "boundary-vanishing";
    for k in 0..=ctx.degree {
        if !ctx.reduced[0][k].is_zero() {
            return SuiteOutcome::fail(name, format!("F_0{k} != 0"));
        }
        if !ctx.reduced[k][ctx.degree].is_zero() {
            return SuiteOutcome::fail(name, format!("F_{k}{} != 0", ctx.degree));
        }
    }
    SuiteOutcome::pass(name, "F_0k = 0 and F_ld = 0 for all indices")
}

fn recursion_oracle(d: &Derivation, ctx: &Ctx) -> Result<SuiteOutcome> {
    let name = "recursion-oracle";
    for l in 0..=ctx.degree {
        for k in 0..=ctx.degree {
            let rec = reduced_incidence_form_recursive(d, l, k)?;
            if rec.poly() != ctx.reduced[l][k].poly() {
                return Ok(SuiteOutcome::fail(
                    name,
                    format!("recursion disagrees with the closed form at ({l},{k})"),
                ));
            }
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        "recursion matches the closed form at every index",
    ))
}

fn degree_two_shortcut(ctx: &Ctx) -> Result<SuiteOutcome> {
    let name = "degree-two-shortcut";
    if ctx.degree != 2 {
        return Ok(SuiteOutcome::pass(name, "skipped (degree != 2)"));
    }
    let two = Rational::from_integer(2.into());
    let shortcut = ctx.raw[1][0]
        .mul(&ctx.raw[2][1])?
        .scale(&two)
        .sub(&ctx.raw[2][0].mul(&ctx.raw[2][0])?)?;
    if shortcut.poly() == ctx.chow.poly() {
        Ok(SuiteOutcome::pass(name, "det F = 2 f10 f21 - f20^2"))
    } else {
        Ok(SuiteOutcome::fail(name, "det F != 2 f10 f21 - f20^2"))
    }
}

fn tau_invariance(ctx: &Ctx) -> SuiteOutcome {
    let name = "tau-invariance";
    let swapped = ctx.chow.dual_swap();
    let expected = if ctx.degree % 2 == 1 {
        ctx.chow.neg()
    } else {
        ctx.chow.clone()
    };
    if swapped.poly() == expected.poly() {
        SuiteOutcome::pass(name, format!("tau P = (-1)^{} P", ctx.degree))
    } else {
        SuiteOutcome::fail(name, "dual swap does not act by (-1)^d")
    }
}

fn bidegree(ctx: &Ctx) -> Result<SuiteOutcome> {
    let name = "bidegree";
    let expanded = ctx.chow.expand()?;
    let d64 = ctx.degree as u64;
    for (m, _) in expanded.terms() {
        let da = m.degree_where(&ctx.table, |k| matches!(k, VarKind::Alpha(_)));
        let db = m.degree_where(&ctx.table, |k| matches!(k, VarKind::Beta(_)));
        if da != d64 || db != d64 {
            return Ok(SuiteOutcome::fail(
                name,
                format!("term of bidegree ({da},{db}), expected ({d64},{d64})"),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("expansion is bihomogeneous of bidegree ({d64},{d64})"),
    ))
}

fn leading_coefficient(d: &Derivation, ctx: &Ctx) -> Result<SuiteOutcome> {
    let name = "leading-coefficient";
    let mut global: Option<Rational> = None;
    for j in 1..=d.n() {
        let top = d.power(ctx.degree, j);
        if top.is_zero() {
            continue;
        }
        let expected = top.pow(ctx.degree as u32)?;
        let actual = ctx.chow.leading_gamma_coefficient(j, ctx.degree as u32);
        let quotient = match actual.exact_divide(&expected) {
            Ok(q) => q,
            Err(_) => {
                return Ok(SuiteOutcome::fail(
                    name,
                    format!("coefficient of g{{{j},0}}^d is not a multiple of (delta^d x{j})^d"),
                ))
            }
        };
        let Some(eps) = quotient.constant_value().cloned() else {
            return Ok(SuiteOutcome::fail(
                name,
                format!("quotient at j = {j} is not a scalar"),
            ));
        };
        match &global {
            None => global = Some(eps),
            Some(g) if *g == eps => {}
            Some(g) => {
                return Ok(SuiteOutcome::fail(
                    name,
                    format!("sign differs across coordinates: {g} vs {eps}"),
                ))
            }
        }
    }
    match global {
        Some(eps) => Ok(SuiteOutcome::pass(
            name,
            format!("single global factor eps = {eps}"),
        )),
        None => Ok(SuiteOutcome::fail(
            name,
            "no coordinate with delta^d x_j != 0",
        )),
    }
}

/// Draw `x` in the generic locus, a flow time and a hyperplane pair through
/// the flowed point; the evaluated Chow form must vanish identically.
fn incidence_vanishing(
    d: &Derivation,
    ctx: &Ctx,
    trials: usize,
    rng: &mut ChaCha12Rng,
) -> Result<SuiteOutcome> {
    let name = "incidence-vanishing";
    for trial in 0..trials {
        let x = random_generic_point(d, rng)?;
        let t = random_rational(rng);
        let y = d.flow(&x, &t)?;
        let alpha = hyperplane_through(&y, rng);
        let beta = hyperplane_through(&y, rng);
        let value = ctx.chow.evaluate(&x.0, &alpha, &beta)?;
        if !value.is_zero() {
            return Ok(SuiteOutcome::fail(
                name,
                format!("trial {trial}: P = {value} at x = {x:?}, t = {t}"),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("{trials} incidence witnesses evaluate to 0"),
    ))
}

/// Random hyperplane pairs miss the orbit closure generically; allow up to
/// three redraws per trial for accidental zeros.
fn non_incidence_nonzero(
    d: &Derivation,
    ctx: &Ctx,
    trials: usize,
    rng: &mut ChaCha12Rng,
) -> Result<SuiteOutcome> {
    let name = "non-incidence-nonzero";
    for trial in 0..trials {
        let x = random_generic_point(d, rng)?;
        let mut hit = false;
        for _redraw in 0..=3 {
            let alpha: Vec<Rational> = (0..=d.n()).map(|_| random_rational(rng)).collect();
            let beta: Vec<Rational> = (0..=d.n()).map(|_| random_rational(rng)).collect();
            if alpha.iter().all(|v| v.is_zero()) || beta.iter().all(|v| v.is_zero()) {
                continue;
            }
            let value = ctx.chow.evaluate(&x.0, &alpha, &beta)?;
            if !value.is_zero() {
                hit = true;
                break;
            }
        }
        if !hit {
            return Ok(SuiteOutcome::fail(
                name,
                format!("trial {trial}: three redraws all evaluated to 0 at x = {x:?}"),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("{trials} generic pairs evaluate nonzero"),
    ))
}

/// On incidence witnesses both linear systems vanish: the raw one in all
/// rows and the reduced one in rows 1..=d, with the factorials cleared to
/// integer multipliers.
fn system_equivalence(
    d: &Derivation,
    ctx: &Ctx,
    trials: usize,
    rng: &mut ChaCha12Rng,
) -> Result<SuiteOutcome> {
    let name = "system-equivalence";
    let deg = ctx.degree;
    let fact_d = factorial(deg);
    let fact_dm1 = factorial(deg.saturating_sub(1));
    for trial in 0..trials {
        let x = random_generic_point(d, rng)?;
        let t = random_rational(rng);
        let y = d.flow(&x, &t)?;
        let alpha = hyperplane_through(&y, rng);
        let beta = hyperplane_through(&y, rng);
        let assign = incidence_assignment(&ctx.table, &x.0, &alpha, &beta);
        let mut tpow = vec![Rational::one()];
        for _ in 0..deg {
            let last = tpow.last().unwrap().clone();
            tpow.push(last * &t);
        }
        for l in 0..=deg {
            let mut acc = Rational::zero();
            for k in 0..=deg {
                let m = Rational::from_integer(&fact_d / factorial(k));
                acc += ctx.raw[l][k].poly().evaluate(&assign)? * &tpow[k] * m;
            }
            if !acc.is_zero() {
                return Ok(SuiteOutcome::fail(
                    name,
                    format!("trial {trial}: raw system row {l} sums to {acc}"),
                ));
            }
        }
        for l in 1..=deg {
            let mut acc = Rational::zero();
            for k in 0..deg {
                let m = Rational::from_integer(&fact_dm1 / factorial(k));
                acc += ctx.reduced[l][k].poly().evaluate(&assign)? * &tpow[k] * m;
            }
            if !acc.is_zero() {
                return Ok(SuiteOutcome::fail(
                    name,
                    format!("trial {trial}: reduced system row {l} sums to {acc}"),
                ));
            }
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("both linear systems vanish on {trials} witnesses"),
    ))
}

fn flow_additivity(d: &Derivation, trials: usize, rng: &mut ChaCha12Rng) -> Result<SuiteOutcome> {
    let name = "flow-additivity";
    for trial in 0..trials {
        let x = random_point(d.n(), rng);
        let s = random_rational(rng);
        let t = random_rational(rng);
        let chained = d.flow(&d.flow(&x, &s)?, &t)?;
        let direct = d.flow(&x, &(s.clone() + t.clone()))?;
        if chained != direct {
            return Ok(SuiteOutcome::fail(
                name,
                format!("trial {trial}: flow(flow(x,{s}),{t}) != flow(x,s+t) at {x:?}"),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("flow is additive on {trials} samples"),
    ))
}

fn slice_identity(d: &Derivation, trials: usize, rng: &mut ChaCha12Rng) -> Result<SuiteOutcome> {
    let name = "slice-identity";
    let deg = d.degree();
    for trial in 0..trials {
        let x = random_generic_point(d, rng)?;
        let valid: Vec<usize> = (1..=d.n())
            .filter(|&j| {
                !d.power(deg, j).is_zero()
                    && !d
                        .eval_at(d.power(deg, j), &x)
                        .unwrap_or_else(|_| Rational::zero())
                        .is_zero()
            })
            .collect();
        let j = valid[rng.gen_range(0..valid.len())];
        let normalized = d.slice_normalize(&x, j)?;
        let value = d.eval_at(d.power(deg - 1, j), &normalized)?;
        if !value.is_zero() {
            return Ok(SuiteOutcome::fail(
                name,
                format!(
                    "trial {trial}: delta^{}x{j} = {value} after normalizing {x:?}",
                    deg - 1
                ),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("slice identity holds on {trials} samples"),
    ))
}

fn locus_stability(d: &Derivation, trials: usize, rng: &mut ChaCha12Rng) -> Result<SuiteOutcome> {
    let name = "locus-stability";
    for trial in 0..trials {
        let x = random_point(d.n(), rng);
        let t = random_rational(rng);
        let before = d.in_generic_locus(&x)?;
        let after = d.in_generic_locus(&d.flow(&x, &t)?)?;
        if before != after {
            return Ok(SuiteOutcome::fail(
                name,
                format!("trial {trial}: membership changed along the flow at {x:?}, t = {t}"),
            ));
        }
    }
    Ok(SuiteOutcome::pass(
        name,
        format!("generic locus is flow-invariant on {trials} samples"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::specfile::{bundled, load_str};

    #[test]
    fn all_suites_pass_on_bundled_actions() {
        for (name, text) in bundled::all() {
            let p = load_str(text).unwrap();
            let report = run_checks(&p.derivation, 12, 42).unwrap();
            for o in &report.outcomes {
                assert!(o.passed, "{name}/{}: {}", o.name, o.detail);
            }
        }
    }

    #[test]
    fn reports_are_seed_deterministic() {
        let p = load_str(bundled::QUADRATIC_C3).unwrap();
        let a = run_checks(&p.derivation, 8, 7).unwrap();
        let b = run_checks(&p.derivation, 8, 7).unwrap();
        let render = |r: &CheckReport| {
            r.outcomes
                .iter()
                .map(|o| format!("{}:{}:{}", o.name, o.passed, o.detail))
                .collect::<Vec<_>>()
                .join("\n")
        };
        assert_eq!(render(&a), render(&b));
    }
}
